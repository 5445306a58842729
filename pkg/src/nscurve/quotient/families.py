"""Closed-form solution families of the quotient system."""

from __future__ import annotations

from .. import calculus as C
from ..errors import ParameterError
from ..thermo import BOUNDARY_MARGIN, ThermoConstants
from .fields import QuotientFields


def ideal_gas_quotient(k1: float, k2: float, c: ThermoConstants) -> QuotientFields:
    """Ideal-gas family: H2 = 0, H1 linear in x, H3 ~ x**((n+2)/n)."""
    n, R, zeta, glam = c.n, c.R, c.zeta, c.glam
    p = (n + 2) / n

    fns = (
        lambda x, y: k1 * x + 0.0 * y,
        lambda x, y: 0.0 * x + 0.0 * y,
        lambda x, y: k2 * C.power(x, p) + 0.0 * y,
        lambda x, y: glam - k2 * R * C.power(x, p) + 0.0 * y,
        lambda x, y: 2 * k1 * x * (k1 * zeta - R * y) / (R * n),
    )
    return QuotientFields(fns, lambda x, y: x > BOUNDARY_MARGIN, "ideal",
                          {"family": "ideal", "k1": k1, "k2": k2})


# Real-valued conventions for (x/(x-3))**q with 0 < x < 3, where the base is
# negative.  "factored" keeps b**(1+q) = b * b**q; the other two apply one
# rule to both exponents and break that identity.
POWER_BRANCHES = ("factored", "abs", "signed")


def _vdw_powers(b, q: float, branch: str):
    """Return (b**q, b**(1+q)) under the chosen branch."""
    if branch == "factored":
        bq = C.abs_power(b, q)
        return bq, b * bq
    if branch == "abs":
        return C.abs_power(b, q), C.abs_power(b, 1 + q)
    if branch == "signed":
        s = -1.0 if C.value(b) < 0 else 1.0
        return s * C.abs_power(b, q), s * C.abs_power(b, 1 + q)
    raise ParameterError(f"branch must be one of {POWER_BRANCHES}")


def vdw_quotient(c1v: float, c2v: float, c: ThermoConstants,
                 branch: str = "factored") -> QuotientFields:
    """Van der Waals family on 0 < x < 3."""
    if branch not in POWER_BRANCHES:
        raise ParameterError(f"branch must be one of {POWER_BRANCHES}")
    n, R, zeta, glam = c.n, c.R, c.zeta, c.glam
    q = 2.0 / n

    def h3(x, y):
        bq, _ = _vdw_powers(x / (x - 3), q, branch)
        return c1v * x * bq + 0.0 * y

    def h4(x, y):
        _, bq1 = _vdw_powers(x / (x - 3), q, branch)
        return glam + 3 * c1v * R * bq1 + 0.0 * y

    fns = (
        lambda x, y: c2v * x + 0.0 * y,
        lambda x, y: 0.0 * x + 0.0 * y,
        h3,
        h4,
        lambda x, y: 2 * c2v * x * (c2v * zeta * (x - 3) + 3 * R * y) / (n * R * (x - 3)),
    )

    def dom(x, y):
        return BOUNDARY_MARGIN < x < 3 - BOUNDARY_MARGIN

    return QuotientFields(fns, dom, "vdw",
                          {"family": "vdw", "c1": c1v, "c2": c2v, "power_branch": branch})
