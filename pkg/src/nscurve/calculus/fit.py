from __future__ import annotations

import math
from typing import Iterable, Tuple

import numpy as np

from ..errors import InsufficientData


def loglog_slope(samples: Iterable[Tuple[float, float]]) -> float:
    """Least-squares slope of ln r against ln x.

    Samples must have x > 0, r > 0 and strictly decreasing x.
    """
    pts = [(float(x), float(r)) for x, r in samples]
    if len(pts) < 3:
        raise InsufficientData(f"need at least 3 samples, got {len(pts)}")
    xs = [p[0] for p in pts]
    if any(b >= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x samples must be strictly decreasing")
    if any(x <= 0 or r <= 0 or not math.isfinite(r) for x, r in pts):
        raise ValueError("samples must be positive and finite")
    lx = np.log(xs)
    lr = np.log([p[1] for p in pts])
    slope, _ = np.polyfit(lx, lr, 1)
    return float(slope)
