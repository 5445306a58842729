"""Scaling symmetries of the quotient system and their action on solutions.

A scaling flow acts by x -> e^(a1 eps) x, y -> e^(a2 eps) y and
H_i -> e^(w_i eps) H_i, except that H4 is scaled about the fixed value
g*lam.  Solutions are pushed forward by

    H~(x~, y~) = scale * H(inverse_flow(x~, y~)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from ..errors import DomainError, EvaluationError
from ..thermo import PlanckPotential, ThermoConstants, thermo_jets
from .fields import QuotientFields


@dataclass(frozen=True)
class ScalingFlow:
    a1: float
    a2: float
    weights: Tuple[float, float, float, float, float]
    name: str = ""

    def apply(self, eps: float, point: Sequence[float], state: Sequence[float],
              c: ThermoConstants):
        x, y = point
        glam = c.glam
        s = [math.exp(w * eps) for w in self.weights]
        h = list(state)
        new_state = (s[0] * h[0], s[1] * h[1], s[2] * h[2],
                     glam + s[3] * (h[3] - glam), s[4] * h[4])
        return (math.exp(self.a1 * eps) * x, math.exp(self.a2 * eps) * y), new_state

    def generator(self, point: Sequence[float], state: Sequence[float],
                  c: ThermoConstants) -> Tuple[float, ...]:
        """Components of the infinitesimal generator along (x, y, H1..H5)."""
        x, y = point
        w = self.weights
        h = state
        return (self.a1 * x, self.a2 * y, w[0] * h[0], w[1] * h[1], w[2] * h[2],
                w[3] * (h[3] - c.glam), w[4] * h[4])


def prop1_weights(alpha1: float, alpha2: float) -> Tuple[float, ...]:
    return (alpha1 + alpha2, 2 * alpha1 + alpha2 / 2, alpha1 + 1.5 * alpha2,
            alpha1 + 1.5 * alpha2, alpha1 + 2 * alpha2)


def prop1_scaling(alpha1: float, alpha2: float) -> ScalingFlow:
    return ScalingFlow(alpha1, alpha2, prop1_weights(alpha1, alpha2), "prop1")


PROP2 = ScalingFlow(1.0, 0.0, (1.0, 2.0, 1.0, 1.0, 1.0), "prop2")


def prop2_flow(eps: float, point, state, c: ThermoConstants):
    return PROP2.apply(eps, point, state, c)


def prop1_flow(eps: float, alpha1: float, alpha2: float, point, state, c: ThermoConstants):
    return prop1_scaling(alpha1, alpha2).apply(eps, point, state, c)


def translation_flow(eps: float, point, state, c: Optional[ThermoConstants] = None):
    """The y-translation that accompanies the two-parameter scaling family."""
    x, y = point
    return (x, y + eps), tuple(state)


def prop2_generator(point, state, c: ThermoConstants):
    return PROP2.generator(point, state, c)


def prop1_generator(alpha1: float, alpha2: float, point, state, c: ThermoConstants):
    return prop1_scaling(alpha1, alpha2).generator(point, state, c)


def pushforward(Q: QuotientFields, flow: ScalingFlow, eps: float,
                c: ThermoConstants) -> QuotientFields:
    """Image of the solution Q under the flow at parameter eps."""
    ix, iy = math.exp(-flow.a1 * eps), math.exp(-flow.a2 * eps)
    s = [math.exp(w * eps) for w in flow.weights]
    glam = c.glam

    def comp(i):
        f = Q.fns[i]
        if i == 3:
            return lambda x, y: glam + s[3] * (f(ix * x, iy * y) - glam)
        return lambda x, y: s[i] * f(ix * x, iy * y)

    def dom(x, y):
        return Q.contains(ix * x, iy * y)

    meta = dict(Q.meta)
    meta.update({"pushforward": flow.name, "eps": eps})
    return QuotientFields(tuple(comp(i) for i in range(5)), dom,
                          f"{Q.label}@{flow.name}({eps:g})", meta)


def _default_points() -> Iterable[Tuple[float, float]]:
    vals = (0.6, 0.9, 1.3, 1.7, 2.2)
    return [(x, y) for x in vals for y in vals]


def in_prop2_class(pot: PlanckPotential, c: ThermoConstants,
                   points: Optional[Iterable[Tuple[float, float]]] = None,
                   tol: float = 1e-9) -> bool:
    """Whether Phi = f1(y) + (C1 + C2/y) ln x + C3/(x y) for some f1, C1..C3.

    On that class the pressure -R x^2 y Phi_x is exactly alpha x y + beta x
    + gamma with constant coefficients, and conversely.  This is checked at
    sample points inside the potential domain.
    """
    pts = [p for p in (points if points is not None else _default_points())
           if pot.contains(*p)]
    if not pts:
        raise DomainError("no sample point lies inside the potential domain")
    coeffs = []
    for x, y in pts:
        try:
            P, _ = thermo_jets(pot, c, x, y)
        except EvaluationError:
            return False
        scale = max(1.0, abs(P.v), abs(P.vx) * x, abs(P.vy) * y)
        if abs(P.vxx) * x * x > tol * scale or abs(P.vyy) * y * y > tol * scale:
            return False
        alpha = P.vxy
        beta = P.vx - y * alpha
        gamma = P.v - x * P.vx
        coeffs.append((alpha, beta, gamma, scale))
    a0, b0, g0, _ = coeffs[0]
    for a, b, g, scale in coeffs[1:]:
        if max(abs(a - a0), abs(b - b0), abs(g - g0)) > tol * scale:
            return False
    return True
