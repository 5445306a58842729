"""Navier-Stokes flow on a curve with height h(a) = lam * a.

Residuals of the three balance laws (momentum, mass, energy) for candidate
fields u, rho, theta of (t, a), plus the two closed-form solution families
(ideal gas and van der Waals).  Constructors only transcribe formulas; the
residual decides whether a candidate is a solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from . import calculus as C
from .calculus import Jet2, OdeSystem, ScalarField2, jet_eval, ode_solve
from .errors import DomainError, EvaluationError, ParameterError
from .thermo import PlanckPotential, ThermoConstants, thermo_jets

_MARGIN = 1e-12


@dataclass(frozen=True)
class FlowFields:
    """Velocity, density and temperature as fields of (t, a)."""

    u: ScalarField2
    rho: ScalarField2
    theta: ScalarField2
    label: str = ""
    meta: Dict[str, object] = field(default_factory=dict)

    def contains(self, t: float, a: float) -> bool:
        return all(f.contains(t, a) for f in (self.u, self.rho, self.theta))


@dataclass(frozen=True)
class NSResidual:
    r_momentum: float
    r_mass: float
    r_energy: float
    # largest |additive term| of each equation, for scale-free comparisons
    scale_momentum: float = 0.0
    scale_mass: float = 0.0
    scale_energy: float = 0.0

    def raw(self) -> Tuple[float, float, float]:
        return (self.r_momentum, self.r_mass, self.r_energy)

    def normalized(self) -> Tuple[float, float, float]:
        return tuple(abs(r) / max(1.0, s) for r, s in zip(
            self.raw(), (self.scale_momentum, self.scale_mass, self.scale_energy)))

    def max_normalized(self) -> float:
        return max(self.normalized())


def _total(*terms: float) -> Tuple[float, float]:
    return sum(terms), max(abs(t) for t in terms)


def ns_residual(f: FlowFields, pot: PlanckPotential, c: ThermoConstants,
                t: float, a: float) -> NSResidual:
    """Pointwise left-hand sides of the momentum, mass and energy equations."""
    u = jet_eval(f.u, t, a)
    rho = jet_eval(f.rho, t, a)
    th = jet_eval(f.theta, t, a)
    if not (rho.v > 0 and th.v > 0):
        raise DomainError(f"non-positive density/temperature at (t={t!r}, a={a!r}): "
                          f"rho={rho.v!r}, theta={th.v!r}")
    P, S = thermo_jets(pot, c, rho.v, th.v)

    # jets of (t, a): vx is the t-derivative, vy the a-derivative
    p_a = P.vx * rho.vy + P.vy * th.vy
    mat_rho = rho.vx + u.v * rho.vy
    mat_th = th.vx + u.v * th.vy
    s_mat = S.vx * mat_rho + S.vy * mat_th

    r_mom, s_mom = _total(rho.v * (u.vx + u.v * u.vy), p_a, -c.zeta * u.vyy, -c.glam * rho.v)
    r_mass, s_mass = _total(rho.vx, rho.vy * u.v, rho.v * u.vy)
    r_en, s_en = _total(rho.v * th.v * s_mat, -c.kappa * th.vyy, -c.zeta * u.vy * u.vy)
    out = NSResidual(r_mom, r_mass, r_en, s_mom, s_mass, s_en)
    if not all(math.isfinite(v) for v in out.raw()):
        raise EvaluationError(f"non-finite residual at (t={t!r}, a={a!r})")
    return out


# -- ideal gas ---------------------------------------------------------------

DENSITY_FORMS = ("printed", "a_independent")


def ideal_gas_ns_solution(c1: float, c2: float, c3: float, c4: float, c: ThermoConstants,
                          density: str = "a_independent", rho_scale: float = 1.0) -> FlowFields:
    """Ideal-gas flow family.

    ``density="printed"`` uses rho = c1 a / (c1 t + c2) as originally
    displayed; ``"a_independent"`` uses rho = rho_scale / (c1 t + c2).  Only
    the latter with rho_scale = 1 satisfies the balance laws (see
    :func:`ns_residual`); both are kept so the check stays reproducible.
    """
    if density not in DENSITY_FORMS:
        raise ParameterError(f"density must be one of {DENSITY_FORMS}")
    glam, n, zeta, R = c.glam, c.n, c.zeta, c.R

    def dom(t, a):
        return c1 * t + c2 > _MARGIN

    def u(t, a):
        T = c1 * t + c2
        return c1 * a / T + (glam * t * (c1 * t + 2 * c2) + c3) / (2 * T)

    if density == "printed":
        def rho(t, a):
            return c1 * a / (c1 * t + c2)
    else:
        def rho(t, a):
            return rho_scale / (c1 * t + c2) + 0.0 * a

    def theta(t, a):
        return c4 / C.power(c1 * t + c2, 2.0 / n) + c1 * zeta / R + 0.0 * a

    meta = {"family": "ideal", "c": [c1, c2, c3, c4], "density": density,
            "rho_scale": rho_scale}
    return FlowFields(ScalarField2(u, dom, "u"), ScalarField2(rho, dom, "rho"),
                      ScalarField2(theta, dom, "theta"), label="ideal", meta=meta)


# -- van der Waals -------------------------------------------------------------

F2_ODE_FORMS = ("printed", "energy")


def _signed(w, p):
    """w**(1+p) on the real branch consistent with |w|**p."""
    return w * C.abs_power(w, p)


def vdw_f1(t, c1, c2, c3, c: ThermoConstants):
    n, R, glam = c.n, c.R, c.glam
    T = c2 * t + c3
    W = 1 - 3 * T
    num = (R * c1 * n * C.abs_power(W, -2.0 / n) * (n - 6 * T)
           + 3 * glam * c2 * t * (c2 * n * t - 2 * (c2 * t - c3 * (n - 2))))
    return num / (6 * c2 * T * (n - 2))


def vdw_f2_rhs(t: float, f2: float, c1, c2, c3, c4, c: ThermoConstants,
               form: str = "printed") -> float:
    """f2' from the linear ODE accompanying the van der Waals family.

    ``form="printed"`` rearranges the displayed relation; ``"energy"`` is the
    relation implied by the energy balance (leading factor 6 instead of 9 and
    the opposite sign on the f2/viscosity bracket).
    """
    n, R, zeta, glam = c.n, c.R, c.zeta, c.glam
    T = c2 * t + c3
    W = 1 - 3 * T
    lead = 9.0 if form == "printed" else 6.0
    sgn = 1.0 if form == "printed" else -1.0
    coef = lead * (2 - n) * c2 * T * (W * R * n * T)
    if abs(coef) < 1e-300:
        raise DomainError(f"f2' coefficient vanishes at t={t!r}")
    rest = (lead * (2 - n) * c2 * T * sgn * 2 * c2 * (3 * R * T * f2 + zeta * c2 * W)
            + 3 * (2 - n) * n * c1 * c2 * R * ((c2 * t + 2 * c3) * glam * t + 2 * c4)
            * _signed(W, -2.0 / n)
            - R * R * n * n * c1 * c1 * (n - 6 * T) * _signed(W, -4.0 / n))
    return -rest / coef


class _F2:
    """Dense f2(t) from forward/backward integrations around t0.

    Derivatives come from the interpolant, not from the ODE right-hand side,
    so substituting f2 back into the energy balance measures the integration
    error instead of cancelling by construction.
    """

    def __init__(self, pieces):
        self.pieces = pieces

    def _piece(self, t):
        for tr in self.pieces:
            lo, hi = sorted((tr.t0, tr.t1))
            if lo - 1e-12 <= t <= hi + 1e-12:
                return tr
        raise DomainError(f"t={t!r} outside the integrated f2 range")

    def __call__(self, t):
        tv = C.value(t)
        tr = self._piece(tv)
        f0 = float(tr(tv)[0])
        f1 = float(tr.derivative(tv)[0])
        f2 = float(tr.second_derivative(tv)[0])
        return C.lift(t, f0, f1, f2)


def vdw_ns_solution(c1: float, c2: float, c3: float, c4: float,
                    f2_init: Tuple[float, float], c: ThermoConstants,
                    t_range: Optional[Tuple[float, float]] = None,
                    f2_ode: str = "printed", rel_tol: float = 1e-10,
                    abs_tol: float = 1e-12, max_step: Optional[float] = None) -> FlowFields:
    """Van der Waals flow family with f2 integrated numerically.

    Powers of W = 1 - 3 c2 t - 3 c3 use the real branch |W|**p with
    W**(1+p) = W |W|**p, so the family is defined on either side of W = 0.
    The density 1/(c2 t + c3) lies inside the gas domain 0 < rho < 3 only
    where W < 0.
    """
    if f2_ode not in F2_ODE_FORMS:
        raise ParameterError(f"f2_ode must be one of {F2_ODE_FORMS}")
    if c2 == 0:
        raise ParameterError("c2 must be non-zero")
    if c.n == 2:
        raise ParameterError("n = 2 makes the f1 closed form singular")
    t0, v0 = f2_init
    lo, hi = t_range if t_range is not None else (t0, t0 + 1.0)
    lo, hi = min(lo, t0), max(hi, t0)

    def admissible(t):
        T = c2 * t + c3
        return abs(T) > _MARGIN and abs(1 - 3 * T) > _MARGIN

    for tt in np.linspace(lo, hi, 65):
        if not admissible(tt):
            raise DomainError(f"c2 t + c3 or 1 - 3(c2 t + c3) vanishes near t={tt!r}")

    def rhs_scalar(t, f2):
        return vdw_f2_rhs(t, f2, c1, c2, c3, c4, c, f2_ode)

    sys = OdeSystem(1, lambda t, y: [rhs_scalar(t, y[0])],
                    lambda t, y: admissible(t), name="vdw f2")
    pieces = []
    for end in (hi, lo):
        if end != t0:
            cap = max_step if max_step is not None else abs(end - t0) / 512
            pieces.append(ode_solve(sys, t0, [v0], end, rel_tol, abs_tol, max_step=cap))
    if not pieces:
        raise ParameterError("t_range must extend beyond t0")
    f2 = _F2(pieces)

    def dom(t, a):
        return lo - 1e-12 <= t <= hi + 1e-12 and admissible(t)

    def rho(t, a):
        return 1.0 / (c2 * t + c3) + 0.0 * a

    def u(t, a):
        return (c2 * a + c4) / (c2 * t + c3) + vdw_f1(t, c1, c2, c3, c)

    def theta(t, a):
        T = c2 * t + c3
        return c1 * a / T * C.abs_power(1 - 3 * T, -2.0 / c.n) + f2(t)

    meta = {"family": "vdw", "c": [c1, c2, c3, c4], "f2_init": [t0, v0],
            "t_range": [lo, hi], "f2_ode": f2_ode, "power_branch": "factored"}
    return FlowFields(ScalarField2(u, dom, "u"), ScalarField2(rho, dom, "rho"),
                      ScalarField2(theta, dom, "theta"), label="vdw", meta=meta)


def constant_state(u0: float, rho0: float, theta0: float) -> FlowFields:
    def const(v):
        return ScalarField2(lambda t, a: v + 0.0 * t + 0.0 * a, name="const")

    return FlowFields(const(u0), const(rho0), const(theta0), label="constant",
                      meta={"family": "constant", "state": [u0, rho0, theta0]})
