"""Run configuration: one YAML (or JSON) file with tagged sections.

Example::

    constants: {R: 1, n: 5, kappa: 1, zeta: 1, g: 9.8, lambda: 1}
    potential: {kind: virial, A: ["0.2 / y"]}
    family: {kind: ideal, k1: 1, k2: 0.5}
    grid: {x: [0.5, 2], y: [0.5, 2], nx: 20, ny: 20}
    tolerance: 1e-8

Unset constants take the defaults of :class:`ThermoConstants`; the resolved
values are echoed into every report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import expr
from .errors import ConfigError, NSCurveError
from .thermo import Custom, IdealGas, PlanckPotential, ThermoConstants, VanDerWaals, Virial

POTENTIAL_KINDS = ("ideal", "vdw", "virial", "custom")
_CONSTANT_KEYS = {"R": "R", "n": "n", "kappa": "kappa", "zeta": "zeta", "g": "g",
                  "lambda": "lam", "lam": "lam"}


@dataclass
class RunConfig:
    raw: Dict[str, Any] = field(default_factory=dict)
    source: str = "<defaults>"

    def section(self, name: str) -> Dict[str, Any]:
        v = self.raw.get(name, {})
        if v is None:
            return {}
        if not isinstance(v, dict):
            raise ConfigError(f"section {name!r} must be a mapping")
        return v

    def get(self, name: str, default=None):
        return self.raw.get(name, default)


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a mapping at the top level")
    return RunConfig(raw, str(p))


def as_float(v, what: str) -> float:
    if isinstance(v, bool):
        raise ConfigError(f"{what} must be a number, got {v!r}")
    try:
        out = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a number, got {v!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{what} must be finite, got {v!r}")
    return out


def float_list(v, what: str, length: Optional[int] = None) -> List[float]:
    if not isinstance(v, (list, tuple)):
        raise ConfigError(f"{what} must be a list, got {v!r}")
    out = [as_float(x, what) for x in v]
    if length is not None and len(out) != length:
        raise ConfigError(f"{what} must have {length} entries, got {len(out)}")
    return out


def constants_from(cfg: RunConfig) -> ThermoConstants:
    sec = cfg.section("constants")
    kw = {}
    for key, val in sec.items():
        if key not in _CONSTANT_KEYS:
            raise ConfigError(f"unknown constant {key!r}")
        kw[_CONSTANT_KEYS[key]] = as_float(val, f"constants.{key}")
    try:
        return ThermoConstants(**kw)
    except NSCurveError as exc:
        raise ConfigError(str(exc)) from exc


def potential_from(cfg: RunConfig, c: ThermoConstants) -> PlanckPotential:
    sec = cfg.section("potential") or {"kind": "ideal"}
    kind = sec.get("kind", "ideal")
    n = as_float(sec.get("n", c.n), "potential.n")
    if n != c.n:
        raise ConfigError(f"potential.n={n} disagrees with constants.n={c.n}")
    if kind == "ideal":
        return IdealGas(n)
    if kind == "vdw":
        return VanDerWaals(n)
    if kind == "virial":
        texts = sec.get("A", [])
        if not isinstance(texts, list):
            raise ConfigError("potential.A must be a list of expressions in y")
        coeffs = tuple(expr.parse(str(t), ("y",)) for t in texts)
        return Virial(n, coeffs, tuple(str(t) for t in texts))
    if kind == "custom":
        text = sec.get("phi")
        if not text:
            raise ConfigError("custom potential needs a 'phi' expression in x, y")
        fn = expr.parse(str(text), ("x", "y"))
        return Custom(fn=fn, domain=lambda x, y: x > 0 and y > 0, label=str(text))
    raise ConfigError(f"potential.kind must be one of {POTENTIAL_KINDS}, got {kind!r}")


def parse_grid_flag(text: Optional[str]) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--grid expects NX,NY, got {text!r}")
    try:
        nx, ny = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"--grid expects integers, got {text!r}") from None
    if nx < 1 or ny < 1:
        raise ConfigError("grid counts must be positive")
    return nx, ny


def grid_from(cfg: RunConfig, names: Tuple[str, str], defaults: Tuple[Sequence[float], Sequence[float]],
              counts: Optional[Tuple[int, int]] = None, default_counts=(10, 10)):
    """Cartesian grid (list of points) from the grid section; ranges are closed."""
    sec = cfg.section("grid")
    r0 = float_list(sec.get(names[0], list(defaults[0])), f"grid.{names[0]}", 2)
    r1 = float_list(sec.get(names[1], list(defaults[1])), f"grid.{names[1]}", 2)
    if counts is None:
        counts = (int(sec.get("n" + names[0], default_counts[0])),
                  int(sec.get("n" + names[1], default_counts[1])))
    if counts[0] < 1 or counts[1] < 1:
        raise ConfigError("grid counts must be positive")
    if r0[0] > r0[1] or r1[0] > r1[1]:
        raise ConfigError("grid ranges must be ordered as [lo, hi]")
    g0 = np.linspace(r0[0], r0[1], counts[0]) if counts[0] > 1 else np.array([r0[0]])
    g1 = np.linspace(r1[0], r1[1], counts[1]) if counts[1] > 1 else np.array([r1[0]])
    spec = {names[0]: r0, names[1]: r1, "n" + names[0]: counts[0], "n" + names[1]: counts[1]}
    return [(float(a), float(b)) for a in g0 for b in g1], spec


def tolerance_from(cfg: RunConfig, flag: Optional[float], default: float) -> float:
    tol = flag if flag is not None else cfg.get("tolerance", default)
    tol = as_float(tol, "tolerance")
    if tol <= 0:
        raise ConfigError("tolerance must be positive")
    return tol
