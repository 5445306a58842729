"""Adaptive Dormand-Prince 5(4) integrator with PI step control.

Dense output is the method's fourth-order continuous extension: the cubic
Hermite interpolant through the step endpoints plus one correction term built
from the stages (Hairer, Norsett & Wanner, Sec. II.6).  Without the stored
correction it falls back to plain cubic Hermite.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DomainError, DomainExit, EvaluationError, StepFailure

# Butcher tableau (Hairer, Norsett & Wanner, Table 5.2)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                187 / 2100, 1 / 40])
_E = _B5 - _B4
# weights of the dense-output correction term
_D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
               -10690763975 / 1880347072, 701980252875 / 199316789632,
               -1453857185 / 822651844, 69997945 / 29380423])

_SAFETY = 0.9
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass(frozen=True)
class OdeSystem:
    dimension: int
    rhs: Callable[[float, np.ndarray], Sequence[float]]
    domain: Optional[Callable[[float, np.ndarray], bool]] = None
    name: str = ""

    def contains(self, t: float, y: np.ndarray) -> bool:
        return True if self.domain is None else bool(self.domain(t, y))


class _StageRejected(Exception):
    def __init__(self, domain: bool):
        self.domain = domain


class Trajectory:
    """Accepted steps of an integration, queryable anywhere on [t0, t1]."""

    def __init__(self, ts, ys, fs, qs=None):
        self.ts = np.asarray(ts, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.fs = np.asarray(fs, dtype=float)
        # per-step correction of the interpolant (None: cubic Hermite)
        self.qs = None if qs is None else np.asarray(qs, dtype=float)
        self._increasing = self.ts[-1] >= self.ts[0]
        self._keys = list(self.ts if self._increasing else -self.ts)

    @property
    def t0(self) -> float:
        return float(self.ts[0])

    @property
    def t1(self) -> float:
        return float(self.ts[-1])

    def _locate(self, t: float):
        lo, hi = min(self.t0, self.t1), max(self.t0, self.t1)
        span = max(hi - lo, 1.0)
        if not (lo - 1e-12 * span <= t <= hi + 1e-12 * span):
            raise DomainError(f"t={t!r} outside the integrated interval [{lo}, {hi}]")
        key = t if self._increasing else -t
        i = bisect.bisect_right(self._keys, key) - 1
        i = min(max(i, 0), len(self.ts) - 2)
        ta, tb = self.ts[i], self.ts[i + 1]
        h = tb - ta
        return i, h, (t - ta) / h

    def _dense(self, t: float, order: int) -> np.ndarray:
        if len(self.ts) == 1:
            return self.ys[0] if order == 0 else (self.fs[0] if order == 1 else 0 * self.fs[0])
        i, h, s = self._locate(t)
        y0, y1 = self.ys[i], self.ys[i + 1]
        dy = y1 - y0
        r3 = h * self.fs[i] - dy
        r4 = dy - h * self.fs[i + 1] - r3
        q = self.qs[i] if self.qs is not None else 0.0 * y0
        # y(s) = y0 + s dy + s(1-s) r3 + s^2(1-s) r4 + s^2(1-s)^2 q
        if order == 0:
            return y0 + s * (dy + (1 - s) * (r3 + s * (r4 + (1 - s) * q)))
        if order == 1:
            return (dy + (1 - 2 * s) * r3 + (2 * s - 3 * s * s) * r4
                    + 2 * s * (1 - s) * (1 - 2 * s) * q) / h
        return (-2 * r3 + (2 - 6 * s) * r4 + (2 - 12 * s + 12 * s * s) * q) / (h * h)

    def __call__(self, t: float) -> np.ndarray:
        return self._dense(float(t), 0)

    def derivative(self, t: float) -> np.ndarray:
        return self._dense(float(t), 1)

    def second_derivative(self, t: float) -> np.ndarray:
        return self._dense(float(t), 2)

    def __len__(self) -> int:
        return len(self.ts)


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(v * v)))


def ode_solve(sys: OdeSystem, t0: float, y0, t1: float,
              rel_tol: float = 1e-10, abs_tol: float = 1e-12,
              h0: Optional[float] = None, max_steps: int = 200_000,
              max_step: Optional[float] = None) -> Trajectory:
    """Integrate ``sys`` from (t0, y0) to t1 and return the dense trajectory.

    ``max_step`` caps the step length, which bounds the error of the dense
    output (and of its derivatives) between steps.

    Raises DomainError if the start is outside the domain, DomainExit (a
    StepFailure that is also a DomainError) when the step size collapses
    against the domain boundary, and StepFailure for any other collapse.
    """
    if t0 == t1:
        raise ValueError("t0 and t1 must differ")
    if rel_tol <= 0 or abs_tol < 0:
        raise ValueError("tolerances must be positive")
    y = np.array(y0, dtype=float).reshape(-1)
    if y.size != sys.dimension:
        raise ValueError(f"initial state has size {y.size}, expected {sys.dimension}")
    if not sys.contains(t0, y):
        raise DomainError(f"initial point t={t0!r} outside the domain of {sys.name or 'system'}")

    def f(t, state):
        if not sys.contains(t, state):
            raise _StageRejected(domain=True)
        try:
            out = np.asarray(sys.rhs(t, state), dtype=float)
        except DomainError:
            raise _StageRejected(domain=True)
        except (EvaluationError, ZeroDivisionError, OverflowError, ValueError):
            raise _StageRejected(domain=False)
        if out.shape != (sys.dimension,):
            raise ValueError(f"rhs returned shape {out.shape}, expected ({sys.dimension},)")
        if not np.all(np.isfinite(out)):
            raise _StageRejected(domain=False)
        return out

    try:
        k0 = f(t0, y)
    except _StageRejected:
        raise EvaluationError(f"rhs undefined at the initial point t={t0!r}") from None

    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    if h0 is None:
        scale = abs_tol + rel_tol * np.abs(y)
        d0, d1 = _rms(y / scale), _rms(k0 / scale)
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h = min(h, span)
    else:
        h = min(abs(h0), span)

    ts, ys, fs, qs = [t0], [y.copy()], [k0.copy()], []
    t = t0
    err_prev = 1e-4
    last_domain = False
    steps = 0
    while direction * (t1 - t) > 0:
        steps += 1
        if steps > max_steps:
            raise StepFailure(f"exceeded {max_steps} steps at t={t!r}")
        hmin = 16 * np.finfo(float).eps * max(abs(t), 1.0)
        if h < hmin:
            msg = f"step size underflow at t={t!r}"
            if last_domain:
                raise DomainExit(msg + " (trial stages leave the domain)")
            raise StepFailure(msg)
        if max_step is not None:
            h = min(h, max_step)
        if h > abs(t1 - t) or abs(t1 - t) - h < hmin:
            h = abs(t1 - t)
        hs = direction * h
        try:
            ks = [k0]
            for i in range(1, 7):
                yi = y + hs * sum(a * k for a, k in zip(_A[i], ks))
                ks.append(f(t + _C[i] * hs, yi))
        except _StageRejected as exc:
            last_domain = exc.domain
            h *= 0.25
            continue
        y_new = y + hs * sum(b * k for b, k in zip(_B5, ks) if b != 0.0)
        err_vec = hs * sum(e * k for e, k in zip(_E, ks) if e != 0.0)
        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(err_vec / scale)
        if not math.isfinite(err):
            last_domain = False
            h *= 0.25
            continue
        if err <= 1.0:
            t_new = t1 if h == abs(t1 - t) else t + hs
            qs.append(hs * sum(d * k for d, k in zip(_D, ks) if d != 0.0))
            t, y, k0 = t_new, y_new, ks[6]
            ts.append(t)
            ys.append(y.copy())
            fs.append(k0.copy())
            factor = _SAFETY * max(err, 1e-10) ** (-_ALPHA) * err_prev ** _BETA
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            err_prev = max(err, 1e-4)
            last_domain = False
        else:
            factor = _SAFETY * err ** (-1 / 5)
            h *= max(_MIN_FACTOR, factor)
    return Trajectory(ts, ys, fs, qs)
