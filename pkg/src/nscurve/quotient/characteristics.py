"""Characteristic vector fields Z1 = H2 d/dx + H3 d/dy, Z2 = x H1 d/dx - H5 d/dy."""

from __future__ import annotations

import math
from typing import Tuple

from ..calculus import OdeSystem, Trajectory, ode_solve
from ..errors import DomainError, EvaluationError, ParameterError, StepFailure
from .fields import NAMES, QuotientFields

FIELDS = ("Z1", "Z2")

# fields shorter than this are treated as stationary points
_ZERO = 1e-14


def _z_from_values(which: str, x: float, h) -> Tuple[float, float]:
    if which == "Z1":
        return (h[1], h[2])
    if which == "Z2":
        return (x * h[0], -h[4])
    raise ParameterError(f"characteristic field must be one of {FIELDS}, got {which!r}")


def characteristic_fields(Q: QuotientFields, x: float, y: float):
    """(Z1, Z2) at (x, y) as 2-tuples."""
    h = Q.values(x, y)
    return _z_from_values("Z1", x, h), _z_from_values("Z2", x, h)


def directional_derivative(Q: QuotientFields, Z: str, F: str, x: float, y: float) -> float:
    """Z applied to the component F (one of H1..H5) at (x, y)."""
    if F not in NAMES:
        raise ParameterError(f"F must be one of {NAMES}, got {F!r}")
    jets = Q.jets(x, y)
    zx, zy = _z_from_values(Z, x, [j.v for j in jets])
    f = jets[NAMES.index(F)]
    return zx * f.vx + zy * f.vy


def integrate_characteristic(Q: QuotientFields, which: str, start: Tuple[float, float],
                             arc: float, tol: float = 1e-10) -> Trajectory:
    """Integral curve of Z1 or Z2 through ``start``, parametrized by arclength.

    The returned trajectory maps s in [0, arc] (or [arc, 0] for arc < 0)
    to the point (x, y).
    """
    if which not in FIELDS:
        raise ParameterError(f"characteristic field must be one of {FIELDS}, got {which!r}")
    if arc == 0:
        raise ParameterError("arc must be non-zero")
    x0, y0 = (float(v) for v in start)
    if not Q.contains(x0, y0):
        raise DomainError(f"start ({x0!r}, {y0!r}) outside the field domain")
    z = _z_from_values(which, x0, Q.values(x0, y0))
    if math.hypot(*z) < _ZERO:
        raise StepFailure(f"{which} vanishes at the start point ({x0!r}, {y0!r})")

    def rhs(s, p):
        zx, zy = _z_from_values(which, p[0], Q.values(p[0], p[1]))
        norm = math.hypot(zx, zy)
        if norm < _ZERO:
            raise EvaluationError(f"{which} vanishes at ({p[0]!r}, {p[1]!r})")
        return [zx / norm, zy / norm]

    sys = OdeSystem(2, rhs, lambda s, p: Q.contains(p[0], p[1]), name=f"{which} curve")
    return ode_solve(sys, 0.0, [x0, y0], float(arc), rel_tol=tol, abs_tol=tol * 1e-2)
