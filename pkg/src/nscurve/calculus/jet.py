"""Second-order forward-mode dual numbers in two variables.

A :class:`Jet2` carries a value together with its gradient and Hessian with
respect to two seed variables.  Components may themselves be ``Jet2``
instances; nesting one level gives exact third derivatives, which is how
pressure and entropy (first derivatives of the Planck potential) get exact
second partials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

from ..errors import DomainError, EvaluationError


def _level(v: Any) -> int:
    return v.level if isinstance(v, Jet2) else 0


class Jet2:
    """Value and partials up to second order in (x, y)."""

    __slots__ = ("v", "vx", "vy", "vxx", "vxy", "vyy")

    def __init__(self, v, vx=0.0, vy=0.0, vxx=0.0, vxy=0.0, vyy=0.0):
        self.v = v
        self.vx = vx
        self.vy = vy
        self.vxx = vxx
        self.vxy = vxy
        self.vyy = vyy

    @property
    def level(self) -> int:
        return 1 + _level(self.v)

    @classmethod
    def variable_x(cls, x) -> "Jet2":
        return cls(x, 1.0, 0.0)

    @classmethod
    def variable_y(cls, y) -> "Jet2":
        return cls(y, 0.0, 1.0)

    def components(self) -> tuple:
        return (self.v, self.vx, self.vy, self.vxx, self.vxy, self.vyy)

    def is_finite(self) -> bool:
        for c in self.components():
            if isinstance(c, Jet2):
                if not c.is_finite():
                    return False
            elif not math.isfinite(c):
                return False
        return True

    def _same(self, other) -> bool:
        return isinstance(other, Jet2) and other.level == self.level

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Jet2(-self.v, -self.vx, -self.vy, -self.vxx, -self.vxy, -self.vyy)

    def __pos__(self):
        return self

    def __add__(self, other):
        if self._same(other):
            return Jet2(self.v + other.v, self.vx + other.vx, self.vy + other.vy,
                        self.vxx + other.vxx, self.vxy + other.vxy, self.vyy + other.vyy)
        return Jet2(self.v + other, self.vx, self.vy, self.vxx, self.vxy, self.vyy)

    __radd__ = __add__

    def __sub__(self, other):
        if self._same(other):
            return Jet2(self.v - other.v, self.vx - other.vx, self.vy - other.vy,
                        self.vxx - other.vxx, self.vxy - other.vxy, self.vyy - other.vyy)
        return Jet2(self.v - other, self.vx, self.vy, self.vxx, self.vxy, self.vyy)

    def __rsub__(self, other):
        return Jet2(other - self.v, -self.vx, -self.vy, -self.vxx, -self.vxy, -self.vyy)

    def __mul__(self, other):
        if self._same(other):
            a, b = self, other
            return Jet2(
                a.v * b.v,
                a.vx * b.v + a.v * b.vx,
                a.vy * b.v + a.v * b.vy,
                a.vxx * b.v + 2.0 * (a.vx * b.vx) + a.v * b.vxx,
                a.vxy * b.v + a.vx * b.vy + a.vy * b.vx + a.v * b.vxy,
                a.vyy * b.v + 2.0 * (a.vy * b.vy) + a.v * b.vyy,
            )
        return Jet2(self.v * other, self.vx * other, self.vy * other,
                    self.vxx * other, self.vxy * other, self.vyy * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if self._same(other):
            out = self * other._reciprocal()
            out.v = self.v / other.v
            return out
        return Jet2(self.v / other, self.vx / other, self.vy / other,
                    self.vxx / other, self.vxy / other, self.vyy / other)

    def __rtruediv__(self, other):
        out = self._reciprocal() * other
        out.v = other / self.v
        return out

    def _reciprocal(self):
        r = 1.0 / self.v
        return _chain(self, r, -(r * r), 2.0 * (r * r * r))

    def __pow__(self, p):
        if isinstance(p, Jet2):
            out = exp(p * log(self))
            out.v = power(self.v, p.v)
            return out
        if p == 0:
            return Jet2(_one_like(self.v))
        if p == 1:
            return self
        v = self.v
        return _chain(self, power(v, p), p * power(v, p - 1), p * (p - 1) * power(v, p - 2))

    def __rpow__(self, base):
        lb = math.log(base)
        f0 = power(base, self.v)
        return _chain(self, f0, f0 * lb, f0 * (lb * lb))

    # comparisons act on the innermost value -------------------------------
    def __float__(self):
        return float(value(self))

    def __repr__(self) -> str:
        return (f"Jet2(v={self.v!r}, vx={self.vx!r}, vy={self.vy!r}, "
                f"vxx={self.vxx!r}, vxy={self.vxy!r}, vyy={self.vyy!r})")


def _one_like(v):
    return Jet2(_one_like(v.v)) if isinstance(v, Jet2) else 1.0


def _chain(a: Jet2, f0, f1, f2) -> Jet2:
    """Compose a unary function with value f0 and derivatives f1, f2 at a.v."""
    return Jet2(
        f0,
        f1 * a.vx,
        f1 * a.vy,
        f2 * (a.vx * a.vx) + f1 * a.vxx,
        f2 * (a.vx * a.vy) + f1 * a.vxy,
        f2 * (a.vy * a.vy) + f1 * a.vyy,
    )


def value(a) -> float:
    """Innermost real value of a (possibly nested) jet."""
    while isinstance(a, Jet2):
        a = a.v
    return a


# elementary functions, dispatching on plain reals vs jets -----------------

def log(a):
    if isinstance(a, Jet2):
        r = 1.0 / a.v
        return _chain(a, log(a.v), r, -(r * r))
    return math.log(a)


def exp(a):
    if isinstance(a, Jet2):
        e = exp(a.v)
        return _chain(a, e, e, e)
    return math.exp(a)


def sqrt(a):
    if isinstance(a, Jet2):
        s = sqrt(a.v)
        return _chain(a, s, 0.5 / s, -0.25 / (s * a.v))
    return math.sqrt(a)


def sin(a):
    if isinstance(a, Jet2):
        s, c = sin(a.v), cos(a.v)
        return _chain(a, s, c, -s)
    return math.sin(a)


def cos(a):
    if isinstance(a, Jet2):
        s, c = sin(a.v), cos(a.v)
        return _chain(a, c, -s, -c)
    return math.cos(a)


def power(a, p):
    """a**p for real or jet base and exponent; a negative real base needs an integer p."""
    if isinstance(a, Jet2):
        return a ** p
    if isinstance(p, Jet2):
        return p.__rpow__(a)
    if a < 0 and not float(p).is_integer():
        raise ValueError(f"negative base {a!r} to non-integer power {p!r}")
    return a ** p


def abs_power(a, p: float):
    """|a|**p, smooth away from a = 0."""
    if isinstance(a, Jet2):
        s = -1.0 if value(a) < 0 else 1.0
        return power(a * s, p)
    return abs(a) ** p


def lift(y: Any, f0: float, f1: float, f2: float):
    """Compose a one-variable function known through (f, f', f'') with y.

    ``y`` may be a plain real (returns f0) or a first-level jet.
    """
    if isinstance(y, Jet2):
        return _chain(y, f0, f1, f2)
    return f0


# scalar fields --------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField2:
    """A two-variable field evaluable under plain-real or jet arithmetic.

    ``fn`` must only use the elementary functions of this module (or plain
    arithmetic) so that it works for both argument kinds.
    """

    fn: Callable[[Any, Any], Any]
    domain: Optional[Callable[[float, float], bool]] = None
    name: str = ""

    def __call__(self, x, y):
        return self.fn(x, y)

    def contains(self, x: float, y: float) -> bool:
        return True if self.domain is None else bool(self.domain(x, y))


def _check_domain(f: ScalarField2, x: float, y: float) -> None:
    if not f.contains(x, y):
        label = f.name or "field"
        raise DomainError(f"({x!r}, {y!r}) outside the domain of {label}")


def _guarded(fn, *args):
    try:
        return fn(*args)
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise EvaluationError(f"evaluation failed: {exc}") from exc


def jet_eval(f: ScalarField2, x: float, y: float) -> Jet2:
    """Exact value, gradient and Hessian of f at (x, y)."""
    _check_domain(f, x, y)
    out = _guarded(f.fn, Jet2.variable_x(x), Jet2.variable_y(y))
    if not isinstance(out, Jet2):
        out = Jet2(float(out))
    if not out.is_finite():
        raise EvaluationError(f"non-finite jet at ({x!r}, {y!r}): {out!r}")
    return out


def real_eval(f: ScalarField2, x: float, y: float) -> float:
    _check_domain(f, x, y)
    out = _guarded(f.fn, x, y)
    if isinstance(out, complex) or not math.isfinite(out):
        raise EvaluationError(f"non-finite value at ({x!r}, {y!r})")
    return out


def fd_jet(f: ScalarField2, x: float, y: float, h: float) -> Jet2:
    """Central-difference jet on the 3x3 stencil of spacing h."""
    if not h > 0:
        raise ValueError("h must be positive")
    vals = {}
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            px, py = x + i * h, y + j * h
            if not f.contains(px, py):
                raise DomainError(f"stencil point ({px!r}, {py!r}) outside the domain")
            vals[i, j] = real_eval(f, px, py)
    f0 = vals[0, 0]
    return Jet2(
        f0,
        (vals[1, 0] - vals[-1, 0]) / (2 * h),
        (vals[0, 1] - vals[0, -1]) / (2 * h),
        (vals[1, 0] - 2 * f0 + vals[-1, 0]) / (h * h),
        (vals[1, 1] - vals[1, -1] - vals[-1, 1] + vals[-1, -1]) / (4 * h * h),
        (vals[0, 1] - 2 * f0 + vals[0, -1]) / (h * h),
    )
