"""Planck-potential thermodynamics: state models, pressure and entropy.

Pressure and specific entropy follow from the potential Phi(x, y), with x the
density and y the temperature::

    P = -R x^2 y Phi_x,        S = R (Phi + y Phi_y)

Both are obtained by differentiating Phi with nested jets, so every model
(including user-supplied ones) gets exact first and second partials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Tuple

from . import calculus as C
from .calculus import Jet2, ScalarField2
from .errors import DomainError, EvaluationError, ParameterError

# evaluation closer than this to a domain boundary is rejected
BOUNDARY_MARGIN = 1e-12


@dataclass(frozen=True)
class ThermoConstants:
    """Medium and geometry constants.

    ``lam`` is the slope of the curve height h(a) = lam * a.
    """

    R: float = 1.0
    n: float = 5.0
    kappa: float = 1.0
    zeta: float = 1.0
    g: float = 9.8
    lam: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise ParameterError(f"R must be positive, got {self.R}")
        if not self.n > 0:
            raise ParameterError(f"n must be positive, got {self.n}")
        if self.kappa < 0 or self.zeta < 0:
            raise ParameterError("kappa and zeta must be non-negative")
        if self.g < 0:
            raise ParameterError("g must be non-negative")

    @property
    def glam(self) -> float:
        return self.g * self.lam

    def as_dict(self) -> dict:
        return {"R": self.R, "n": self.n, "kappa": self.kappa, "zeta": self.zeta,
                "g": self.g, "lambda": self.lam}


class PlanckPotential:
    """Base class: a thermodynamic model given by its Planck potential."""

    kind = "custom"

    def phi(self, x, y):
        raise NotImplementedError

    def contains(self, x: float, y: float) -> bool:
        raise NotImplementedError

    @property
    def field(self) -> ScalarField2:
        return ScalarField2(self.phi, self.contains, name=f"{self.kind} potential")

    def describe(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class IdealGas(PlanckPotential):
    n: float = 5.0
    kind = "ideal"

    def phi(self, x, y):
        return (self.n / 2) * C.log(y) - C.log(x)

    def contains(self, x, y):
        return x > BOUNDARY_MARGIN and y > BOUNDARY_MARGIN

    def describe(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class VanDerWaals(PlanckPotential):
    """Reduced van der Waals gas, singular at x = 3."""

    n: float = 5.0
    kind = "vdw"

    def phi(self, x, y):
        return (self.n / 2) * C.log(y) + C.log(3 / x - 1) + 9 * x / (8 * y)

    def contains(self, x, y):
        return BOUNDARY_MARGIN < x < 3 - BOUNDARY_MARGIN and y > BOUNDARY_MARGIN

    def describe(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class Virial(PlanckPotential):
    """Ideal gas corrected by a truncated virial series in the density.

    ``coeffs[i-1]`` is A_i, a one-variable function of temperature that
    works under jet arithmetic.
    """

    n: float = 5.0
    coeffs: Tuple[Callable[[Any], Any], ...] = ()
    labels: Tuple[str, ...] = ()
    kind = "virial"

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def phi(self, x, y):
        out = (self.n / 2) * C.log(y) - C.log(x)
        xi = 1.0
        for i, a in enumerate(self.coeffs, start=1):
            xi = xi * x
            out = out - (xi / i) * a(y)
        return out

    def contains(self, x, y):
        return x > BOUNDARY_MARGIN and y > BOUNDARY_MARGIN

    def describe(self):
        return {"kind": self.kind, "n": self.n, "A": list(self.labels)}


@dataclass(frozen=True)
class Custom(PlanckPotential):
    fn: Callable[[Any, Any], Any] = None
    domain: Optional[Callable[[float, float], bool]] = None
    label: str = ""
    kind = "custom"

    def phi(self, x, y):
        return self.fn(x, y)

    def contains(self, x, y):
        return True if self.domain is None else bool(self.domain(x, y))

    def describe(self):
        return {"kind": self.kind, "phi": self.label}


def _check(pot: PlanckPotential, x: float, y: float) -> None:
    if not pot.contains(x, y):
        raise DomainError(f"({x!r}, {y!r}) outside the {pot.kind} potential domain")


def phi_jet(pot: PlanckPotential, x: float, y: float) -> Jet2:
    return C.jet_eval(pot.field, x, y)


def _as_jet(v) -> Jet2:
    return v if isinstance(v, Jet2) else Jet2(float(v))


def thermo_jets(pot: PlanckPotential, c: ThermoConstants, x: float, y: float) -> Tuple[Jet2, Jet2]:
    """Pressure and entropy jets at (x, y) from one nested evaluation of Phi."""
    _check(pot, x, y)
    xi, yi = Jet2.variable_x(x), Jet2.variable_y(y)
    try:
        out = pot.phi(Jet2(xi, 1.0, 0.0), Jet2(yi, 0.0, 1.0))
        phi0, phix, phiy = _as_jet(out.v), _as_jet(out.vx), _as_jet(out.vy)
        p = -c.R * (xi * xi) * yi * phix
        s = c.R * (phi0 + yi * phiy)
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise EvaluationError(f"thermodynamics undefined at ({x!r}, {y!r}): {exc}") from exc
    if not (p.is_finite() and s.is_finite()):
        raise EvaluationError(f"non-finite pressure/entropy at ({x!r}, {y!r})")
    return p, s


def pressure(pot: PlanckPotential, c: ThermoConstants, x: float, y: float) -> Jet2:
    return thermo_jets(pot, c, x, y)[0]


def entropy(pot: PlanckPotential, c: ThermoConstants, x: float, y: float) -> Jet2:
    return thermo_jets(pot, c, x, y)[1]


def pressure_field(pot: PlanckPotential, c: ThermoConstants) -> ScalarField2:
    """P as a plain scalar field (first derivatives taken by jets of Phi)."""

    def fn(x, y):
        return -c.R * x * x * y * _phi_x(pot, x, y)

    return ScalarField2(fn, pot.contains, name="pressure")


def entropy_field(pot: PlanckPotential, c: ThermoConstants) -> ScalarField2:
    def fn(x, y):
        return c.R * (pot.phi(x, y) + y * _phi_y(pot, x, y))

    return ScalarField2(fn, pot.contains, name="entropy")


def _phi_x(pot, x, y):
    return pot.phi(Jet2(x, 1.0, 0.0), Jet2(y)).vx


def _phi_y(pot, x, y):
    return pot.phi(Jet2(x), Jet2(y, 0.0, 1.0)).vy
