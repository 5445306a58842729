"""Power-series solutions of the quotient system for a virial-type potential.

With Phi = (n/2) ln y - ln x - sum_i A_i(y) x^i / i the unknowns are expanded
as

    H_i(x, y) = x^(d_i) * sum_k H_{i,k}(y) x^k,    d = (2, 1, 0, 4, 2),

and each power of x gives a system of ordinary differential equations in y.
Order 0 has a closed form; order 1 is a semi-explicit index-1 DAE (H_{2,1}
is algebraic) that is integrated numerically.

Orders k >= 2 follow the same cascade (each order is linear in its own
unknowns with coefficients from lower orders) but are not implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import calculus as C
from .calculus import Jet2, OdeSystem, Trajectory, loglog_slope, ode_solve
from .errors import DomainError, InsufficientData, ParameterError
from .quotient.equations import R2_VARIANTS, QuotientResidual, quotient_residual
from .quotient.fields import QuotientFields
from .thermo import PlanckPotential, ThermoConstants, Virial

D_EXPONENTS = (2, 1, 0, 4, 2)

# "corrected" satisfies the fifth order-0 equation; "printed" keeps the
# c3 (R c1 c3 - 2 g lam) y term as originally displayed.  They agree at lam = 0.
H40_FORMS = ("corrected", "printed")

# "printed" is the order-1 system as displayed; "expanded" is the x^1
# coefficient of the quotient system under the series ansatz.
ORDER1_FORMS = ("printed", "expanded")


@dataclass(frozen=True)
class SeriesSolution:
    """Coefficient functions H_{i,k}(y), i = 1..5, k = 0..K.

    ``coeffs[i][k]`` maps y (a real or a jet) to H_{i+1,k}(y).
    """

    coeffs: Tuple[Tuple[Callable[[Any], Any], ...], ...]
    K: int
    constants: Tuple[float, float, float, float]
    y_domain: Tuple[float, float]
    d: Tuple[int, ...] = D_EXPONENTS
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if tuple(self.d) != D_EXPONENTS:
            raise ParameterError(f"leading exponents must be {D_EXPONENTS}, got {tuple(self.d)}")
        if self.K not in (0, 1):
            raise ParameterError(f"truncation order must be 0 or 1, got {self.K}")
        if len(self.coeffs) != 5 or any(len(row) != self.K + 1 for row in self.coeffs):
            raise ParameterError("coeffs must hold K+1 functions for each of H1..H5")
        lo, hi = self.y_domain
        if not 0 < lo < hi:
            raise ParameterError(f"y_domain must satisfy 0 < lo < hi, got {self.y_domain}")

    def contains(self, y: float) -> bool:
        lo, hi = self.y_domain
        return lo - 1e-12 <= y <= hi + 1e-12

    def _check(self, y: float) -> None:
        if not self.contains(y):
            raise DomainError(f"y={y!r} outside the series domain {self.y_domain}")

    def coeff(self, i: int, k: int, y: float) -> float:
        """H_{i,k}(y) with 1-based i."""
        self._check(y)
        return float(self.coeffs[i - 1][k](y))

    def coeff_d(self, i: int, k: int, y: float) -> Tuple[float, float]:
        """(H_{i,k}(y), H_{i,k}'(y))."""
        self._check(y)
        j = self.coeffs[i - 1][k](Jet2.variable_x(y))
        if not isinstance(j, Jet2):
            return float(j), 0.0
        return float(j.v), float(j.vx)


@dataclass(frozen=True)
class Order1State:
    H31: float
    H11: float
    H51: float
    H41: float
    H21: float


# -- order 0 -------------------------------------------------------------------

def _order0_fns(c1, c2, c3, c4, c: ThermoConstants, h40: str):
    R, glam = c.R, c.glam
    P = C.power
    if glam == 0:
        # exponents collapse: H1 and H5 both scale with c2 + c3
        s = c2 + c3
        return (
            lambda y: s * y * y,
            lambda y: -c1 / y,
            lambda y: c1 + 0.0 * y,
            lambda y: P(y, 4) / c1 * (s * s * y + c1 * c4),
            lambda y: s * y * y * y,
        )
    D = R * c1 - glam
    e = glam / (R * c1)
    m = 1 - e
    if h40 == "corrected":
        lin = c3 * c3 * (R * c1 - 2 * glam)
    else:
        lin = c3 * (R * c1 * c3 - 2 * glam)

    def h1(y):
        return P(y, 2 - 2 * e) * (c2 * P(y, -e) + c3)

    def h4(y):
        return P(y, 4 * m) / c1 * (
            c2 * P(y, m) / D * (R * c1 * c2 * P(y, -e) + c3 * (2 * R * c1 - 3 * glam))
            + (lin * y + R * c1 * c1 * c4) / (R * c1))

    def h5(y):
        return P(y, 3 - 2 * e) * (c3 + R * c1 * c2 / D * P(y, -e))

    return (h1, lambda y: (glam - R * c1) / (R * y), lambda y: c1 + 0.0 * y, h4, h5)


def order0_closed_form(c1: float, c2: float, c3: float, c4: float, c: ThermoConstants,
                       y_domain: Tuple[float, float] = (0.5, 2.0),
                       h40: str = "corrected") -> SeriesSolution:
    """Closed-form order-0 coefficients with free constants c1..c4."""
    if h40 not in H40_FORMS:
        raise ParameterError(f"h40 must be one of {H40_FORMS}")
    if c1 == 0:
        raise ParameterError("c1 = 0 makes the order-0 closed form singular")
    if c.glam != 0 and abs(c.R * c1 - c.glam) <= 1e-14 * max(abs(c.R * c1), c.glam):
        raise ParameterError("R c1 = g lam makes the order-0 closed form singular")
    fns = _order0_fns(c1, c2, c3, c4, c, h40)
    return SeriesSolution(tuple((f,) for f in fns), 0, (c1, c2, c3, c4), tuple(y_domain),
                          meta={"order0": "closed_form", "h40": h40,
                                "lambda_zero_path": c.glam == 0})


def _d0(s: SeriesSolution, y: float):
    """Values and derivatives of the order-0 coefficients at y."""
    out = [s.coeff_d(i, 0, y) for i in range(1, 6)]
    return [v for v, _ in out], [d for _, d in out]


def _sum(*terms):
    return sum(terms), max(abs(t) for t in terms)


def order0_equations(y, h, dh, c: ThermoConstants):
    H1, H2, H3, H4, H5 = h
    d1, d2, d3, d4, d5 = dh
    R, glam = c.R, c.glam
    eqs = (
        _sum(d3),
        _sum(R * y * H2, R * H3, -glam),
        _sum(H5 * d2, H3 * d1, 3 * H1 * H2),
        _sum(H3 * d5, -H5 * d3, 2 * H5 * H2, -H3 * H1),
        _sum(H3 * d4, -H5 * d1, H1 * H1, 4 * H2 * H4),
    )
    return QuotientResidual(tuple(e[0] for e in eqs), tuple(e[1] for e in eqs))


def order0_residual(s: SeriesSolution, c: ThermoConstants, y: float) -> QuotientResidual:
    """The five order-0 equations evaluated on the coefficients of s."""
    h, dh = _d0(s, y)
    return order0_equations(y, h, dh, c)


def order0_ode_solve(c: ThermoConstants, y0: float, init: Sequence[float], y1: float,
                     rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> Trajectory:
    """Integrate the order-0 system as an ODE in (H30, H10, H50, H40).

    H20 is eliminated through the algebraic second equation.
    """
    R, glam = c.R, c.glam

    def rhs(y, u):
        H3, H1, H5, H4 = u
        if H3 == 0:
            raise ZeroDivisionError("H30 vanishes")
        H2 = (glam - R * H3) / (R * y)
        d3 = 0.0
        d2 = -(glam - R * H3) / (R * y * y)
        d1 = -(H5 * d2 + 3 * H1 * H2) / H3
        d5 = (H5 * d3 - 2 * H5 * H2 + H3 * H1) / H3
        d4 = (H5 * d1 - H1 * H1 - 4 * H2 * H4) / H3
        return [d3, d1, d5, d4]

    sys = OdeSystem(4, rhs, lambda y, u: y > 0, name="order-0 system")
    return ode_solve(sys, y0, list(init), y1, rel_tol, abs_tol)


# -- order 1 -------------------------------------------------------------------

class _DenseCoeff:
    """One component of a trajectory as a jet-capable function of y."""

    def __init__(self, traj: Trajectory, index: int):
        self.traj = traj
        self.index = index

    def __call__(self, y):
        yv = C.value(y)
        f0 = float(self.traj(yv)[self.index])
        if not isinstance(y, Jet2):
            return f0
        f1 = float(self.traj.derivative(yv)[self.index])
        f2 = float(self.traj.second_derivative(yv)[self.index])
        return C.lift(y, f0, f1, f2)


def _h21(y, H31, o0, A1, c: ThermoConstants, form: str, r2_variant: str):
    """H_{2,1} from the algebraic second order-1 equation.

    ``y`` and ``H31`` may be jets; o0 holds the order-0 coefficient
    functions and A1 the first virial coefficient.
    """
    R, zeta = c.R, c.zeta
    H10, H20, H30 = o0[0](y), o0[1](y), o0[2](y)
    a = A1(y)
    if isinstance(y, Jet2):
        dH10, da = _deriv_jet(o0[0], y), _deriv_jet(A1, y)
    else:
        dH10, da = _deriv(o0[0], y), _deriv(A1, y)
    if form == "printed":
        src = zeta * (H30 * dH10 + 2 * H10 * H20)
        return (src - R * (H30 * a - H31)) / (R * y) - (H30 * da + 2 * a * H20)
    cross = 1.0 if r2_variant == "printed" else zeta
    src = zeta * H30 * dH10 + cross * 2 * H10 * H20
    return (src - R * (H30 * a + H31)) / (R * y) - (H30 * da + 2 * a * H20)


def _deriv(f, y: float) -> float:
    j = f(Jet2.variable_x(y))
    return float(j.vx) if isinstance(j, Jet2) else 0.0


def _deriv_jet(f, y: Jet2):
    """f'(y) as a jet composed with y (needs f'' from a nested evaluation)."""
    yv = C.value(y)
    inner = f(Jet2(Jet2.variable_x(yv), 1.0, 0.0))
    if not isinstance(inner, Jet2):
        return 0.0 * y
    d = inner.vx
    if not isinstance(d, Jet2):
        return 0.0 * y + d
    return C.lift(y, float(d.v), float(d.vx), 0.0)


def order1_solve(s: SeriesSolution, A1: Callable[[Any], Any], c: ThermoConstants,
                 y0: float, init: Sequence[float], y1: float, tol: float = 1e-10,
                 form: str = "printed", r2_variant: str = "printed",
                 max_step: Optional[float] = None) -> SeriesSolution:
    """Extend an order-0 solution by the order-1 coefficients.

    ``init`` holds (H31, H11, H51, H41) at y0.  H21 is eliminated from the
    algebraic equation; its derivative, needed by the third equation, comes
    from differentiating that expression with jets.
    """
    if s.K != 0:
        raise ParameterError("order1_solve expects an order-0 solution")
    if form not in ORDER1_FORMS:
        raise ParameterError(f"form must be one of {ORDER1_FORMS}")
    if r2_variant not in R2_VARIANTS:
        raise ParameterError(f"r2_variant must be one of {R2_VARIANTS}")
    lo, hi = sorted((y0, y1))
    if not (s.contains(lo) and s.contains(hi)) or lo <= 0:
        raise DomainError(f"interval [{lo}, {hi}] outside the series domain {s.y_domain}")
    if s.coeff(3, 0, y0) == 0:
        raise ParameterError("H30 = 0: the order-1 system cannot be solved for derivatives")
    o0 = tuple(row[0] for row in s.coeffs)

    def rhs(y, u):
        H31, H11, H51, H41 = u
        (H10, H20, H30, H40, H50), (d10, d20, d30, d40, d50) = _d0(s, y)
        if H30 == 0:
            raise ZeroDivisionError("H30 vanishes")
        d31 = -(H20 + d30) * H31 / H30
        yj = Jet2.variable_x(y)
        h21 = _h21(yj, C.lift(yj, H31, d31, 0.0), o0, A1, c, form, r2_variant)
        H21, d21 = h21.v, h21.vx
        d11 = -(H50 * d21 + 4 * H20 * H11 + 2 * H10 * H21 + d10 * H31 + d20 * H51) / H30
        if form == "printed":
            d51 = -(-H30 * H11 + 2 * H50 * H21 + (d50 - H50) * H31
                    + (3 * H20 - d30) * H51) / H30
        else:
            d51 = -(-H30 * H11 + 2 * H50 * H21 + d50 * H31 - H50 * d31
                    + (3 * H20 - d30) * H51) / H30
        d41 = (H50 * d11 - 3 * H10 * H11 - 4 * H40 * H21 - d40 * H31
               - 5 * H20 * H41 + d10 * H51) / H30
        return [d31, d11, d51, d41]

    sys = OdeSystem(4, rhs, lambda y, u: s.contains(y), name="order-1 system")
    cap = max_step if max_step is not None else abs(y1 - y0) / 512
    traj = ode_solve(sys, y0, list(init), y1, rel_tol=tol, abs_tol=tol * 1e-2, max_step=cap)

    h31 = _DenseCoeff(traj, 0)

    def h21(y):
        if isinstance(y, Jet2):
            return _h21(y, h31(y), o0, A1, c, form, r2_variant)
        yj = Jet2.variable_x(y)
        return float(_h21(yj, h31(yj), o0, A1, c, form, r2_variant).v)

    k1 = (_DenseCoeff(traj, 1), h21, h31, _DenseCoeff(traj, 3), _DenseCoeff(traj, 2))
    coeffs = tuple((o0[i], k1[i]) for i in range(5))
    meta = dict(s.meta)
    meta.update({"order1_form": form, "r2_variant": r2_variant, "y0": y0, "y1": y1,
                 "init": list(init), "trajectory": traj, "A1": A1})
    return SeriesSolution(coeffs, 1, s.constants, (lo, hi), meta=meta)


def order1_state(s: SeriesSolution, y: float) -> Order1State:
    if s.K < 1:
        raise ParameterError("series has no order-1 terms")
    return Order1State(*(s.coeff(i, 1, y) for i in (3, 1, 5, 4, 2)))


def order1_equations(y, h0, d0, h1, d1, A1v, dA1v, c: ThermoConstants,
                     form: str = "printed", r2_variant: str = "printed") -> QuotientResidual:
    """The five order-1 equations from values and y-derivatives."""
    H10, H20, H30, H40, H50 = h0
    e10, e20, e30, e40, e50 = d0
    H11, H21, H31, H41, H51 = h1
    e11, e21, e31, e41, e51 = d1
    R, zeta = c.R, c.zeta
    eq1 = _sum(H30 * e31, H20 * H31, e30 * H31)
    if form == "printed":
        eq2 = _sum(R * y * H30 * dA1v, R * y * 2 * A1v * H20, R * y * H21, R * H30 * A1v,
                   -R * H31, -zeta * H30 * e10, -zeta * 2 * H10 * H20)
        eq4 = _sum(H30 * e51, -H30 * H11, 2 * H50 * H21, e50 * H31, -H50 * H31,
                   3 * H20 * H51, -e30 * H51)
    else:
        cross = 1.0 if r2_variant == "printed" else zeta
        eq2 = _sum(R * y * H30 * dA1v, R * y * 2 * A1v * H20, R * y * H21, R * H30 * A1v,
                   R * H31, -zeta * H30 * e10, -cross * 2 * H10 * H20)
        eq4 = _sum(H30 * e51, -H30 * H11, 2 * H50 * H21, e50 * H31, -H50 * e31,
                   3 * H20 * H51, -e30 * H51)
    eq3 = _sum(H30 * e11, H50 * e21, 4 * H20 * H11, 2 * H10 * H21, e10 * H31, e20 * H51)
    eq5 = _sum(H50 * e11, -H30 * e41, -3 * H10 * H11, -4 * H40 * H21, -e40 * H31,
               -5 * H20 * H41, e10 * H51)
    eqs = (eq1, eq2, eq3, eq4, eq5)
    return QuotientResidual(tuple(e[0] for e in eqs), tuple(e[1] for e in eqs))


def order1_residual(s: SeriesSolution, c: ThermoConstants, y: float) -> QuotientResidual:
    """Re-substitute the order-1 coefficients of s into their equations.

    Derivatives of the integrated coefficients come from the dense output,
    so the result measures the integration error.
    """
    if s.K < 1:
        raise ParameterError("series has no order-1 terms")
    A1 = s.meta["A1"]
    h0, d0 = _d0(s, y)
    pairs = [s.coeff_d(i, 1, y) for i in range(1, 6)]
    aj = A1(Jet2.variable_x(y))
    A1v, dA1v = (aj.v, aj.vx) if isinstance(aj, Jet2) else (float(aj), 0.0)
    return order1_equations(y, h0, d0, [p[0] for p in pairs], [p[1] for p in pairs],
                            A1v, dA1v, c, s.meta["order1_form"], s.meta["r2_variant"])


# -- reconstruction and residual orders ------------------------------------------

def _xpow(x, p: int):
    out = 1.0
    for _ in range(p):
        out = out * x
    return out


def reconstruct(s: SeriesSolution, x: float, y: float) -> List[float]:
    """H_i(x, y) = sum_k x^(d_i + k) H_{i,k}(y)."""
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    return [sum(_xpow(x, s.d[i] + k) * s.coeff(i + 1, k, y) for k in range(s.K + 1))
            for i in range(5)]


def series_fields(s: SeriesSolution) -> QuotientFields:
    """The truncated series as quotient fields on x > 0, y in the series domain."""

    def comp(i):
        def fn(x, y):
            return sum(_xpow(x, s.d[i] + k) * s.coeffs[i][k](y) for k in range(s.K + 1))
        return fn

    def dom(x, y):
        return x > 0 and s.contains(y)

    return QuotientFields(tuple(comp(i) for i in range(5)), dom, f"series K={s.K}",
                          {"family": "series", "K": s.K})


@dataclass(frozen=True)
class SlopeRecord:
    equation_index: int
    slope: Optional[float]
    samples: Tuple[Tuple[float, float], ...]
    status: str = "ok"

    def as_dict(self) -> dict:
        return {"equation_index": self.equation_index, "slope": self.slope,
                "samples": [list(p) for p in self.samples], "status": self.status}


NOISE_FLOOR = 1e-13


def residual_slopes(Q: QuotientFields, pot: PlanckPotential, c: ThermoConstants, y: float,
                    x_samples: Sequence[float], r2_variant: str = "printed",
                    floor: float = NOISE_FLOOR) -> List[SlopeRecord]:
    """log-log slope of each |residual| against x as x decreases.

    Samples whose residual is below ``floor`` times the equation's term scale
    are treated as machine zero; an equation with fewer than three usable
    samples is reported with status "noise_floor" and no slope.
    """
    xs = [float(v) for v in x_samples]
    if len(xs) < 3:
        raise InsufficientData(f"need at least 3 x samples, got {len(xs)}")
    res = [quotient_residual(Q, pot, c, x, y, r2_variant) for x in xs]
    out = []
    for j in range(5):
        samples = tuple((x, abs(r.r[j])) for x, r in zip(xs, res))
        usable = [(x, v) for (x, v), r in zip(samples, res) if v > floor * max(1.0, r.scales[j])]
        if len(usable) < 3:
            out.append(SlopeRecord(j + 1, None, samples, "noise_floor"))
        else:
            out.append(SlopeRecord(j + 1, loglog_slope(usable), samples))
    return out


def residual_order_check(s: SeriesSolution, pot: PlanckPotential, c: ThermoConstants,
                         y: float, x_samples: Sequence[float],
                         r2_variant: str = "printed") -> List[SlopeRecord]:
    """Slopes of the quotient residuals of the reconstructed series."""
    if not isinstance(pot, Virial):
        raise ParameterError("the series ansatz needs a Virial potential")
    return residual_slopes(series_fields(s), pot, c, y, x_samples, r2_variant)


def coefficient_rows(s: SeriesSolution, k: int, ys: Sequence[float]) -> List[List[float]]:
    """Rows [y, H_{1,k}(y), ..., H_{5,k}(y)]."""
    if not 0 <= k <= s.K:
        raise ParameterError(f"order {k} not present (K={s.K})")
    return [[float(y)] + [s.coeff(i, k, y) for i in range(1, 6)] for y in ys]
