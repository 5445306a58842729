from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..calculus import Jet2, ScalarField2, jet_eval, real_eval
from ..errors import DomainError

NAMES = ("H1", "H2", "H3", "H4", "H5")


@dataclass(frozen=True)
class QuotientFields:
    """Candidate solution H1..H5 of the quotient system as fields of (x, y).

    In terms of the flow: x = rho, y = theta, H1 = u_a, H2 = rho_a,
    H3 = theta_a, H4 = u_t + u u_a, H5 = theta_t + u theta_a.
    """

    fns: Tuple[Callable[[Any, Any], Any], ...]
    domain: Optional[Callable[[float, float], bool]] = None
    label: str = ""
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.fns) != 5:
            raise ValueError("QuotientFields needs exactly five component functions")

    def contains(self, x: float, y: float) -> bool:
        return True if self.domain is None else bool(self.domain(x, y))

    def component(self, i: int) -> ScalarField2:
        """Component H_{i+1} as a scalar field (i is 0-based)."""
        return ScalarField2(self.fns[i], self.domain, name=f"{self.label or 'Q'}.{NAMES[i]}")

    def jets(self, x: float, y: float) -> List[Jet2]:
        if not self.contains(x, y):
            raise DomainError(f"({x!r}, {y!r}) outside the domain of {self.label or 'quotient fields'}")
        return [jet_eval(self.component(i), x, y) for i in range(5)]

    def values(self, x: float, y: float) -> List[float]:
        if not self.contains(x, y):
            raise DomainError(f"({x!r}, {y!r}) outside the domain of {self.label or 'quotient fields'}")
        return [real_eval(self.component(i), x, y) for i in range(5)]


def _const(v: float):
    return lambda x, y: v + 0.0 * x


def constant_fields(values: Sequence[float], label: str = "constant") -> QuotientFields:
    """Fields equal to the given constants everywhere."""
    return QuotientFields(tuple(_const(float(v)) for v in values), None, label,
                          {"family": "constant", "values": list(values)})


def zero_fields() -> QuotientFields:
    return constant_fields([0.0] * 5, label="zero")
