"""Symbol of the quotient system and its determinant."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..thermo import ThermoConstants
from .equations import quotient_equations


@dataclass(frozen=True)
class SymbolData:
    xi: Tuple[float, float]
    matrix: np.ndarray
    point: Tuple[float, float]
    state: Tuple[float, ...]


def symbol_matrix(state: Sequence[float], x: float, xi: Sequence[float],
                  c: ThermoConstants, y: float = float("nan")) -> SymbolData:
    """The 5x5 symbol at covector xi; rows are equations, columns H1..H5."""
    H1, H2, H3, H4, H5 = (float(v) for v in state)
    xi1, xi2 = (float(v) for v in xi)
    k, z = c.kappa, c.zeta
    A = H2 * xi1 + H3 * xi2
    B = x * H1 * xi1 - H5 * xi2
    m = np.array([
        [0.0, 0.0, k * A, 0.0, 0.0],
        [z * A, 0.0, 0.0, 0.0, 0.0],
        [x * A, -x * H1 * xi1 + H5 * xi2, 0.0, 0.0, 0.0],
        [0.0, 0.0, B, 0.0, A],
        [B, 0.0, 0.0, A, 0.0],
    ])
    return SymbolData((xi1, xi2), m, (x, y), (H1, H2, H3, H4, H5))


def symbol_det(state: Sequence[float], x: float, xi: Sequence[float],
               c: ThermoConstants) -> Tuple[float, float]:
    """(LU determinant of the symbol, factored closed form)."""
    H1, H2, H3, H4, H5 = (float(v) for v in state)
    xi1, xi2 = (float(v) for v in xi)
    numeric = float(np.linalg.det(symbol_matrix(state, x, xi, c).matrix))
    closed = c.kappa * c.zeta * (H2 * xi1 + H3 * xi2) ** 4 * (x * H1 * xi1 - H5 * xi2)
    return numeric, closed


def det_scale(state: Sequence[float], x: float, xi: Sequence[float],
              c: ThermoConstants) -> float:
    """Size of the determinant's terms before cancellation.

    Used as the reference magnitude when the determinant itself is near zero.
    """
    H1, H2, H3, H4, H5 = (float(v) for v in state)
    xi1, xi2 = (float(v) for v in xi)
    return (c.kappa * c.zeta * (abs(H2 * xi1) + abs(H3 * xi2)) ** 4
            * (abs(x * H1 * xi1) + abs(H5 * xi2)))


def symbol_from_equations(state: Sequence[float], x: float, y: float, xi: Sequence[float],
                          c: ThermoConstants, r2_variant: str = "symmetric") -> np.ndarray:
    """Symbol read off the residual equations themselves.

    The equations are affine in the first partials, so the coefficient of
    H_j,x (resp. H_j,y) is recovered exactly by a unit perturbation.
    """
    h = [float(v) for v in state]
    xi1, xi2 = (float(v) for v in xi)

    def resid(hx, hy):
        r, _ = quotient_equations(x, y, h, hx, hy, 0.0, 0.0, 0.0, 0.0, c, r2_variant)
        return np.array(r)

    zero = [0.0] * 5
    base = resid(zero, zero)
    m = np.zeros((5, 5))
    for j in range(5):
        e = [0.0] * 5
        e[j] = 1.0
        m[:, j] = xi1 * (resid(e, zero) - base) + xi2 * (resid(zero, e) - base)
    return m
