"""Residuals of the five-equation quotient system."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from ..errors import DomainError, EvaluationError, ParameterError
from ..thermo import PlanckPotential, ThermoConstants, thermo_jets
from .fields import QuotientFields

R2_VARIANTS = ("printed", "symmetric")


@dataclass(frozen=True)
class QuotientResidual:
    r: Tuple[float, float, float, float, float]
    scales: Tuple[float, float, float, float, float]

    @property
    def r1(self):
        return self.r[0]

    @property
    def r2(self):
        return self.r[1]

    @property
    def r3(self):
        return self.r[2]

    @property
    def r4(self):
        return self.r[3]

    @property
    def r5(self):
        return self.r[4]

    def normalized(self) -> Tuple[float, ...]:
        return tuple(abs(r) / max(1.0, s) for r, s in zip(self.r, self.scales))

    def max_normalized(self) -> float:
        return max(self.normalized())

    def max_abs(self) -> float:
        return max(abs(r) for r in self.r)


def _sum(*terms):
    return sum(terms), max(abs(t) for t in terms)


def quotient_equations(x: float, y: float, h: Sequence[float], hx: Sequence[float],
                       hy: Sequence[float], Px: float, Py: float, Sx: float, Sy: float,
                       c: ThermoConstants, r2_variant: str = "printed"):
    """Evaluate the five equations from pointwise values and first partials.

    Returns (residuals, scales) where each scale is the largest absolute
    additive term of its equation.
    """
    H1, H2, H3, H4, H5 = h
    H1x, H2x, H3x, H4x, H5x = hx
    H1y, H2y, H3y, H4y, H5y = hy
    k, z, glam = c.kappa, c.zeta, c.glam

    e1 = _sum(x * y * x * H1 * Sx, -x * y * H5 * Sy, k * H2 * H3x, k * H3 * H3y, z * H1 * H1)
    if r2_variant == "printed":
        lead = H2 * H1x
    elif r2_variant == "symmetric":
        lead = z * H2 * H1x
    else:
        raise ParameterError(f"r2_variant must be one of {R2_VARIANTS}")
    e2 = _sum(lead, z * H3 * H1y, -H2 * Px, -H3 * Py, x * glam, -x * H4)
    e3 = _sum(H2y * H5, x * H1y * H3, -x * H2x * H1, H2 * x * H1x, 2 * H2 * H1)
    e4 = _sum(x * H1 * H3x, -H5 * H3y, H2 * H5x, H3 * H5y, -H3 * H1)
    e5 = _sum(x * H1 * H1x, -H5 * H1y, H2 * H4x, H3 * H4y, -H1 * H1)
    eqs = (e1, e2, e3, e4, e5)
    return tuple(e[0] for e in eqs), tuple(e[1] for e in eqs)


def quotient_residual(Q: QuotientFields, pot: PlanckPotential, c: ThermoConstants,
                      x: float, y: float, r2_variant: str = "printed") -> QuotientResidual:
    """Residuals of the quotient system for fields Q at (x, y)."""
    if not pot.contains(x, y):
        raise DomainError(f"({x!r}, {y!r}) outside the {pot.kind} potential domain")
    jets = Q.jets(x, y)
    P, S = thermo_jets(pot, c, x, y)
    r, scales = quotient_equations(
        x, y, [j.v for j in jets], [j.vx for j in jets], [j.vy for j in jets],
        P.vx, P.vy, S.vx, S.vy, c, r2_variant)
    if not all(math.isfinite(v) for v in r):
        raise EvaluationError(f"non-finite quotient residual at ({x!r}, {y!r})")
    return QuotientResidual(r, scales)
