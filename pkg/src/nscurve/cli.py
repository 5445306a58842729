"""Command-line entry point.

Exit codes: 0 pass, 1 tolerance failure, 2 configuration error,
3 domain or integration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import quotient as Qm
from . import virial as V
from .config import (
    RunConfig,
    as_float,
    constants_from,
    float_list,
    grid_from,
    load_config,
    parse_grid_flag,
    potential_from,
    tolerance_from,
)
from .errors import ConfigError, NSCurveError, StepFailure
from .calculus import ScalarField2
from .ns_system import FlowFields, constant_state, ideal_gas_ns_solution, ns_residual, vdw_ns_solution
from .report import Report, summarize, write_csv, write_json
from .thermo import ThermoConstants

EXIT_OK, EXIT_TOL, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3
DEFAULT_TOL = 1e-8


class Context:
    def __init__(self, args):
        self.args = args
        self.cfg: RunConfig = load_config(args.config)
        self.out = Path(args.out)
        self.grid_counts = parse_grid_flag(args.grid)
        self.c = constants_from(self.cfg)

    def echo(self, **extra) -> Dict:
        out = {"source": self.cfg.source, "raw": self.cfg.raw,
               "constants": self.c.as_dict(), "r2_variant": self.args.r2_variant,
               "seed": self.args.seed}
        out.update(extra)
        return out

    def family(self) -> Dict:
        fam = self.cfg.section("family")
        if "kind" not in fam:
            raise ConfigError("family.kind is required")
        return fam

    def potential(self, default_kind: str):
        if not self.cfg.section("potential"):
            self.cfg.raw["potential"] = {"kind": default_kind}
        return potential_from(self.cfg, self.c)


def _num(fam: Dict, key: str, default=None) -> float:
    if key not in fam:
        if default is None:
            raise ConfigError(f"family.{key} is required")
        return default
    return as_float(fam[key], f"family.{key}")


# -- ns-verify ---------------------------------------------------------------------

def build_flow(fam: Dict, c: ThermoConstants):
    flow = _family_flow(fam, c)
    if "perturb_u" in fam:
        # u -> u + delta * t, a deliberate defect for sanity runs
        delta = _num(fam, "perturb_u")
        u0 = flow.u
        u = ScalarField2(lambda t, a: u0.fn(t, a) + delta * t, u0.domain, "u perturbed")
        meta = dict(flow.meta, perturb_u=delta)
        flow = FlowFields(u, flow.rho, flow.theta, flow.label, meta)
    return flow


def _family_flow(fam: Dict, c: ThermoConstants):
    kind = fam["kind"]
    if kind == "constant":
        return constant_state(_num(fam, "u0", 0.0), _num(fam, "rho0", 1.0), _num(fam, "theta0", 1.0))
    if kind == "ideal":
        return ideal_gas_ns_solution(_num(fam, "c1"), _num(fam, "c2"), _num(fam, "c3"),
                                     _num(fam, "c4"), c,
                                     density=fam.get("density", "a_independent"),
                                     rho_scale=_num(fam, "rho_scale", 1.0))
    if kind == "vdw":
        f2 = float_list(fam.get("f2_init", [0.0, 1.0]), "family.f2_init", 2)
        tr = fam.get("t_range")
        tr = tuple(float_list(tr, "family.t_range", 2)) if tr is not None else None
        return vdw_ns_solution(_num(fam, "c1"), _num(fam, "c2"), _num(fam, "c3"),
                               _num(fam, "c4"), tuple(f2), c, t_range=tr,
                               f2_ode=fam.get("f2_ode", "energy"))
    raise ConfigError(f"ns-verify family.kind must be constant, ideal or vdw, got {kind!r}")


def cmd_ns_verify(ctx: Context) -> int:
    fam = ctx.family()
    tol = tolerance_from(ctx.cfg, ctx.args.tol, DEFAULT_TOL)
    pot = ctx.potential("vdw" if fam["kind"] == "vdw" else "ideal")
    flow = build_flow(fam, ctx.c)
    pts, gspec = grid_from(ctx.cfg, ("t", "a"), ([0.0, 1.0], [0.0, 1.0]), ctx.grid_counts)
    rep = Report("ns-verify")
    rows, raw, norm = [], [], []
    for t, a in pts:
        r = ns_residual(flow, pot, ctx.c, t, a)
        rows.append([t, a, *r.raw()])
        raw.extend(r.raw())
        norm.append(r.max_normalized())
    write_csv(ctx.out / "ns_residuals.csv", ["t", "a", "r_momentum", "r_mass", "r_energy"], rows)
    nmax = max(norm)
    rep.summary = {**summarize(raw), "normalized_max": nmax, "tolerance": tol,
                   "pass": nmax < tol, "points": len(pts)}
    rep.records = [{"t": r[0], "a": r[1], "r_momentum": r[2], "r_mass": r[3], "r_energy": r[4]}
                   for r in rows]
    rep.metadata["family"] = flow.meta
    rep.metadata["potential"] = pot.describe()
    write_json(ctx.out / "ns_report.json", rep.finish(ctx.echo(grid=gspec)))
    return EXIT_OK if nmax < tol else EXIT_TOL


# -- quotient families ----------------------------------------------------------

def build_quotient(fam: Dict, c: ThermoConstants):
    kind = fam["kind"]
    if kind == "zero":
        return Qm.zero_fields()
    if kind == "constant":
        return Qm.constant_fields(float_list(fam.get("values"), "family.values", 5))
    if kind == "ideal":
        return Qm.ideal_gas_quotient(_num(fam, "k1"), _num(fam, "k2"), c)
    if kind == "vdw":
        return Qm.vdw_quotient(_num(fam, "c1"), _num(fam, "c2"), c,
                               branch=fam.get("power_branch", "factored"))
    raise ConfigError(f"quotient family.kind must be zero, constant, ideal or vdw, got {kind!r}")


def cmd_quotient_verify(ctx: Context) -> int:
    fam = ctx.family()
    tol = tolerance_from(ctx.cfg, ctx.args.tol, DEFAULT_TOL)
    pot = ctx.potential("vdw" if fam["kind"] == "vdw" else "ideal")
    Q = build_quotient(fam, ctx.c)
    z1 = bool(ctx.cfg.get("z1_check", False))
    pts, gspec = grid_from(ctx.cfg, ("x", "y"), ([0.5, 2.0], [0.5, 2.0]), ctx.grid_counts)
    header = ["x", "y", "r1", "r2", "r3", "r4", "r5"] + (["Z1H2", "Z1H3"] if z1 else [])
    rows, raw, norm, zvals = [], [], [], []
    for x, y in pts:
        r = Qm.quotient_residual(Q, pot, ctx.c, x, y, ctx.args.r2_variant)
        row = [x, y, *r.r]
        if z1:
            zz = [Qm.directional_derivative(Q, "Z1", F, x, y) for F in ("H2", "H3")]
            row += zz
            zvals.extend(zz)
        rows.append(row)
        raw.extend(r.r)
        norm.append(r.max_normalized())
    write_csv(ctx.out / "quotient_residuals.csv", header, rows)
    nmax = max(norm)
    zmax = max((abs(v) for v in zvals), default=0.0)
    ok = nmax < tol and zmax < tol
    rep = Report("quotient-verify")
    rep.records = [dict(zip(header, row)) for row in rows]
    rep.summary = {**summarize(raw), "normalized_max": nmax, "tolerance": tol, "pass": ok,
                   "points": len(pts)}
    if z1:
        rep.summary["z1_first_integral_max"] = zmax
    rep.metadata["family"] = Q.meta
    rep.metadata["potential"] = pot.describe()
    write_json(ctx.out / "quotient_report.json", rep.finish(ctx.echo(grid=gspec)))
    return EXIT_OK if ok else EXIT_TOL


# -- symbol -------------------------------------------------------------------------

def cmd_symbol(ctx: Context) -> int:
    sec = ctx.cfg.section("symbol")
    tol = tolerance_from(ctx.cfg, ctx.args.tol, 1e-10)
    state = float_list(sec.get("state", [1.0, 0.5, -0.3, 2.0, 0.7]), "symbol.state", 5)
    x = as_float(sec.get("x", 1.0), "symbol.x")
    xis = [float_list(v, "symbol.xi entry", 2) for v in sec.get("xi", [[1.0, 0.0], [0.0, 1.0]])]
    n_random = int(sec.get("random_xi", 0))
    rng = np.random.default_rng(ctx.args.seed)
    xis += [list(rng.uniform(-1, 1, 2)) for _ in range(n_random)]
    H1, H2, H3, H4, H5 = state
    tagged = [(xi, "given") for xi in xis]
    tagged += [([H3, -H2], "characteristic_Z1"), ([H5, x * H1], "characteristic_Z2")]
    rep = Report("symbol")
    ok = True
    for xi, tag in tagged:
        num, closed = Qm.symbol_det(state, x, xi, ctx.c)
        scale = Qm.det_scale(state, x, xi, ctx.c)
        agree = abs(num - closed) <= tol * max(abs(closed), scale, 1e-300) or num == closed
        ok = ok and agree
        rep.records.append({"xi": list(xi), "kind": tag, "numeric_det": num,
                            "closed_form_det": closed, "scale": scale, "agree": agree})
    rep.summary = {"count": len(tagged), "all_agree": ok, "tolerance": tol}
    write_json(ctx.out / "symbol_report.json", rep.finish(ctx.echo(state=state, x=x)))
    return EXIT_OK if ok else EXIT_TOL


# -- characteristics ----------------------------------------------------------------

def cmd_characteristics(ctx: Context) -> int:
    fam = ctx.family()
    sec = ctx.cfg.section("characteristics")
    which = sec.get("field", "Z1")
    if which not in Qm.characteristics.FIELDS:
        raise ConfigError(f"characteristics.field must be Z1 or Z2, got {which!r}")
    starts = [float_list(p, "characteristics.starts entry", 2)
              for p in sec.get("starts", [[1.0, 1.0]])]
    arc = as_float(sec.get("arc", 1.0), "characteristics.arc")
    samples = int(sec.get("samples", 51))
    tol = tolerance_from(ctx.cfg, ctx.args.tol, 1e-10)
    Q = build_quotient(fam, ctx.c)
    rows = []
    rep = Report("characteristics")
    for k, start in enumerate(starts):
        tr = Qm.integrate_characteristic(Q, which, tuple(start), arc, tol)
        for s in np.linspace(0.0, arc, samples):
            p = tr(float(s))
            rows.append([k, float(s), float(p[0]), float(p[1])])
        rep.records.append({"curve": k, "start": start, "steps": len(tr) - 1})
    write_csv(ctx.out / "characteristics.csv", ["curve", "s", "x", "y"], rows)
    rep.summary = {"curves": len(starts), "field": which, "arc": arc}
    write_json(ctx.out / "characteristics_report.json", rep.finish(ctx.echo()))
    return EXIT_OK


# -- virial ---------------------------------------------------------------------------

def cmd_virial(ctx: Context) -> int:
    sec = ctx.cfg.section("virial")
    tol = tolerance_from(ctx.cfg, ctx.args.tol, DEFAULT_TOL)
    if not ctx.cfg.section("potential"):
        ctx.cfg.raw["potential"] = {"kind": "virial", "A": []}
    pot = potential_from(ctx.cfg, ctx.c)
    if pot.kind != "virial":
        raise ConfigError("the virial command needs a virial potential")
    A1 = pot.coeffs[0] if pot.coeffs else (lambda y: 0.0 * y)
    cs = float_list(sec.get("c", [12.0, 0.4, -0.3, 0.8]), "virial.c", 4)
    ydom = tuple(float_list(sec.get("y_domain", [1.0, 2.0]), "virial.y_domain", 2))
    K = int(sec.get("K", 1))
    if K not in (0, 1):
        raise ConfigError("virial.K must be 0 or 1")
    s0 = V.order0_closed_form(*cs, ctx.c, ydom, h40=sec.get("h40", "corrected"))
    ys = np.linspace(ydom[0], ydom[1], int(sec.get("table_points", 31)))
    r0 = max(V.order0_residual(s0, ctx.c, float(y)).max_normalized() for y in ys)
    write_csv(ctx.out / "virial_k0.csv", ["y"] + [f"H{i}_0" for i in range(1, 6)],
              V.coefficient_rows(s0, 0, ys))
    rep = Report("virial")
    rep.summary = {"order0_residual_max": r0, "tolerance": tol}
    ok = r0 < tol
    y_slope = as_float(sec.get("slope_y", 1.5), "virial.slope_y")
    xs = float_list(sec.get("x_samples", [0.1, 0.05, 0.025, 0.0125]), "virial.x_samples")
    v = ctx.args.r2_variant
    k0 = V.residual_order_check(s0, pot, ctx.c, y_slope, xs, v)
    slopes = {"K0": [r.as_dict() for r in k0]}
    for r in k0:
        ok = ok and (r.slope is None or r.slope >= 1 - 0.2)
    if K == 1:
        o1 = ctx.cfg.section("virial").get("order1", {}) or {}
        y0 = as_float(o1.get("y0", ydom[0]), "virial.order1.y0")
        y1 = as_float(o1.get("y1", ydom[1]), "virial.order1.y1")
        init = float_list(o1.get("init", [0.0, 0.0, 0.0, 0.0]), "virial.order1.init", 4)
        s1 = V.order1_solve(s0, A1, ctx.c, y0, init, y1, form=o1.get("form", "printed"),
                            r2_variant=v)
        ys1 = np.linspace(min(y0, y1), max(y0, y1), int(sec.get("table_points", 31)))
        write_csv(ctx.out / "virial_k1.csv", ["y"] + [f"H{i}_1" for i in range(1, 6)],
                  V.coefficient_rows(s1, 1, ys1))
        r1 = max(V.order1_residual(s1, ctx.c, float(y)).max_normalized() for y in ys1)
        tol1 = as_float(o1.get("tolerance", 1e-7), "virial.order1.tolerance")
        k1 = V.residual_order_check(s1, pot, ctx.c, y_slope, xs, v)
        slopes["K1"] = [r.as_dict() for r in k1]
        improves = [b.slope >= a.slope - 0.05 for a, b in zip(k0, k1)
                    if a.slope is not None and b.slope is not None]
        rep.summary.update({"order1_residual_max": r1, "order1_tolerance": tol1,
                            "K1_not_worse": all(improves)})
        ok = ok and r1 < tol1 and all(improves)
    write_json(ctx.out / "virial_slopes.json", slopes)
    rep.summary["pass"] = ok
    rep.metadata["series"] = {"d": list(V.D_EXPONENTS), "K": K, "constants": cs,
                              "h40": s0.meta["h40"], "potential": pot.describe()}
    write_json(ctx.out / "virial_report.json", rep.finish(ctx.echo()))
    return EXIT_OK if ok else EXIT_TOL


# -- symmetry -------------------------------------------------------------------------

def _group_law(flow, c: ThermoConstants, rng) -> float:
    worst = 0.0
    for _ in range(20):
        e, d = rng.uniform(-1, 1, 2)
        p = tuple(rng.uniform(0.5, 2, 2))
        h = tuple(rng.uniform(-2, 2, 5))
        p1, h1 = flow.apply(d, *flow.apply(e, p, h, c), c)
        p2, h2 = flow.apply(e + d, p, h, c)
        worst = max(worst, max(abs(a - b) / max(1.0, abs(b)) for a, b in zip(p1 + h1, p2 + h2)))
    return worst


def cmd_symmetry(ctx: Context) -> int:
    fam = ctx.family()
    sec = ctx.cfg.section("symmetry")
    tol = tolerance_from(ctx.cfg, ctx.args.tol, DEFAULT_TOL)
    pot = ctx.potential("vdw" if fam["kind"] == "vdw" else "ideal")
    which = sec.get("flow", "prop2")
    if which == "prop2":
        flow = Qm.flows.PROP2
        if not Qm.in_prop2_class(pot, ctx.c) and not ctx.args.force:
            print("potential is outside the class admitting this symmetry; use --force",
                  file=sys.stderr)
            return EXIT_CONFIG
    elif which == "prop1":
        flow = Qm.flows.prop1_scaling(as_float(sec.get("alpha1", 1.0), "symmetry.alpha1"),
                                      as_float(sec.get("alpha2", 0.0), "symmetry.alpha2"))
    else:
        raise ConfigError(f"symmetry.flow must be prop1 or prop2, got {which!r}")
    eps_list = float_list(sec.get("eps", [-1.0, -0.5, 0.0, 0.5, 1.0]), "symmetry.eps")
    Q = build_quotient(fam, ctx.c)
    pts, gspec = grid_from(ctx.cfg, ("x", "y"), ([0.5, 2.0], [0.5, 2.0]), ctx.grid_counts,
                           default_counts=(7, 7))
    rng = np.random.default_rng(ctx.args.seed)
    rep = Report("symmetry")
    ok = True
    for eps in eps_list:
        P = Qm.pushforward(Q, flow, eps, ctx.c)
        images = [flow.apply(eps, p, [0.0] * 5, ctx.c)[0] for p in pts]
        worst = max(Qm.quotient_residual(P, pot, ctx.c, x, y, ctx.args.r2_variant).max_normalized()
                    for x, y in images)
        rec = {"eps": eps, "max_normalized_residual": worst}
        if fam["kind"] == "ideal" and which == "prop2":
            T = Qm.ideal_gas_quotient(_num(fam, "k1"), math.exp(-2 * eps / ctx.c.n) * _num(fam, "k2"),
                                      ctx.c)
            rec["family_member_deviation"] = max(
                abs(a - b) for x, y in images for a, b in zip(P.values(x, y), T.values(x, y)))
        ok = ok and worst < tol
        rep.records.append(rec)
    law = _group_law(flow, ctx.c, rng)
    rep.summary = {"max_normalized_residual": max(r["max_normalized_residual"] for r in rep.records),
                   "group_law_error": law, "group_law_pass": law < 1e-12, "tolerance": tol,
                   "pass": ok and law < 1e-12}
    rep.metadata["flow"] = {"name": flow.name, "a1": flow.a1, "a2": flow.a2,
                            "weights": list(flow.weights)}
    write_json(ctx.out / "symmetry_report.json", rep.finish(ctx.echo(grid=gspec)))
    return EXIT_OK if rep.summary["pass"] else EXIT_TOL


COMMANDS = {
    "ns-verify": cmd_ns_verify,
    "quotient-verify": cmd_quotient_verify,
    "symbol": cmd_symbol,
    "characteristics": cmd_characteristics,
    "virial": cmd_virial,
    "symmetry": cmd_symmetry,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML/JSON run configuration")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--tol", type=float, help="pass/fail tolerance on normalized residuals")
    common.add_argument("--grid", help="grid counts NX,NY (overrides the config)")
    common.add_argument("--r2-variant", choices=Qm.R2_VARIANTS, default="printed")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    ap = argparse.ArgumentParser(prog="nscurve",
                                 description="Residual checks for Navier-Stokes flows on a curve.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "symmetry":
            p.add_argument("--force", action="store_true",
                           help="run even if the potential fails the class check")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "force"):
        args.force = False
    try:
        ctx = Context(args)
        return COMMANDS[args.command](ctx)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NSCurveError, StepFailure) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
