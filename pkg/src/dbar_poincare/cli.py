"""Batch front end: parse a JSON experiment config, run it, write reports.

Exit status: 0 when every row passes, 2 when any row fails, 3 when rows are
only inconclusive, 1 for usage or configuration errors (including window
violations, whose message names the violated inequality).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import constants as C
from . import verify as V
from .bm_kernels import reconstruct_bm, reproduction_fields
from .dbar import (FIXED_PSI, GENERAL, HormanderBoundCheck, HormanderInstance, hormander_instances,
                   minimal_solution, run_hormander, solve_cauchy)
from .errors import ConfigurationError, WindowError
from .fields import field_from_dict, make_weight, weight_from_dict, zero_weight
from .geometry import make_domain
from .quadrature import boundary_rule, interior_rule
from .sharpness import SharpnessResult, estimate_sharp_constant

COMMANDS = ("verify", "kernel-bounds", "kmh", "sharpness", "solve-dbar", "hormander",
            "selftest-bm", "report")
COLUMNS = ("tag", "lhs", "rhs", "constant", "margin", "error", "verdict")
EXIT_PASS, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(ConfigurationError):
    """Bad command line or empty report input."""


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    resolution: Optional[int] = None  # None selects the command's default
    seed: int = 0
    out: str = "."
    fmt: str = "csv"


# -- rows --------------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    """One report line plus the audit payload behind it."""

    tag: str
    lhs: float
    rhs: float
    constant: float
    margin: float
    error: float
    verdict: str
    audit: dict = field(default_factory=dict, compare=False)
    chain: object = field(default=None, compare=False)  # ConstantReport for the JSON chain check


def _as_row(rec):
    if isinstance(rec, Row):
        return rec
    if isinstance(rec, V.VerificationRecord):
        return Row(rec.tag, rec.lhs, rec.rhs, rec.constant_value, rec.margin, rec.quadrature_error,
                   rec.verdict, rec.to_dict(), rec.constant)
    if isinstance(rec, SharpnessResult):
        # domination read as delta * 1 <= empirical infimum
        return Row("sharpness_" + rec.tag, 1.0, rec.empirical_inf, rec.analytic_delta, rec.margin,
                   rec.error, V.verdict_for(rec.margin, rec.error), rec.to_dict(), rec.constant)
    if isinstance(rec, HormanderBoundCheck):
        return Row("hormander_" + rec.mode, rec.lhs, rec.improved_rhs, 1.0, rec.margin, rec.error,
                   rec.verdict, rec.to_dict(), None)
    raise UsageError(f"cannot report object of type {type(rec).__name__}")


def _fmt(v):
    if isinstance(v, str):
        return v
    return "%.17g" % v


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def _dumps(obj):
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit_report(records, fmt="csv", path=None):
    """Serialise records as CSV (fixed columns) or JSON (with constant chains).

    Returns the text and writes it to ``path`` when given.  The output is a
    pure function of the records, so identical inputs give identical bytes.
    """
    rows = [_as_row(r) for r in records]
    if not rows:
        raise UsageError("emit_report needs at least one record")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
        text = buf.getvalue()
    elif fmt == "json":
        for r in rows:
            if r.chain is not None and not r.chain.check_chain():
                raise ConfigurationError(f"constant chain of {r.tag} does not re-multiply to its value")
        text = _dumps({"columns": list(COLUMNS),
                       "records": [dict({c: getattr(r, c) for c in COLUMNS}, audit=r.audit)
                                   for r in rows]})
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def exit_status(rows):
    verdicts = {_as_row(r).verdict for r in rows}
    if V.FAIL in verdicts:
        return EXIT_FAIL
    if V.INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


# -- config parsing ----------------------------------------------------------

def _domain(d, default=None):
    if d is None:
        if default is None:
            raise ConfigurationError("config needs a 'domain'")
        return default
    if isinstance(d, str):
        return make_domain(d)
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigurationError(f"malformed domain spec {d!r}")
    return make_domain(d["kind"], d.get("params", ()), d.get("n"))


def _weight(d, n=1):
    if d is None:
        return None
    w = weight_from_dict(d)
    if w.n != n:
        raise ConfigurationError(f"weight lives in C^{w.n}, domain in C^{n}")
    return w


def _field(d, n):
    f = field_from_dict(d)
    if f.n != n:
        raise ConfigurationError(f"field lives in C^{f.n}, domain in C^{n}")
    return f


def _exponents(e):
    if isinstance(e, dict):
        return {k: (math.inf if v in ("inf", "Infinity") else float(v)) for k, v in e.items()}
    return tuple(math.inf if v in ("inf", "Infinity") else float(v) for v in np.atleast_1d(e))


def precheck_window(case, n, exponents):
    """Raise :class:`WindowError` before any quadrature if the exponents are out of window."""
    if case not in V.CASES:
        raise ConfigurationError(f"unknown inequality case {case!r}")
    p, q, r = V._parse_exponents(case, exponents)
    if p < 1:
        raise WindowError("1<=p", f"p={p}")
    if case == V.LP_POINCARE:
        C.check_sobolev_window(n, p, p, p)
    elif case in (V.SOBOLEV_DBAR, V.REAL_SOBOLEV):
        C.check_sobolev_window(n, p, q, r)
    elif case == V.WEIGHTED:
        C.check_weighted_window(n, p, q)
    else:
        C.check_max_modulus_window(n, p, q)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path!r} is not valid JSON: {exc}") from None


# -- commands ----------------------------------------------------------------

def _res(cfg, default):
    return default if cfg.resolution is None else int(cfg.resolution)


def _verify_instances(cfg):
    p = cfg.params
    if "instances" in p:
        out = []
        for it in p["instances"]:
            dom = _domain(it.get("domain", p.get("domain")))
            case = it.get("case", p.get("case"))
            out.append(V.Instance(case, dom, _field(it["field"], dom.n), _exponents(it["exponents"]),
                                  _weight(it.get("weight", p.get("weight")), dom.n)))
        return out
    if "fields" in p:
        dom = _domain(p.get("domain"))
        case = p.get("case")
        w = _weight(p.get("weight"), dom.n)
        return [V.Instance(case, dom, _field(f, dom.n), _exponents(e), w)
                for f in p["fields"] for e in p.get("exponents", [[2.0]])]
    inst = V.default_battery()
    if p.get("case") is not None:
        inst = [i for i in inst if i.case == p["case"]]
    if p.get("domain") is not None:
        dom = _domain(p["domain"])
        inst = [i for i in inst if i.domain == dom]
    return inst


def cmd_verify(cfg):
    inst = _verify_instances(cfg)
    if not inst:
        raise ConfigurationError("no verification instances selected")
    for it in inst:
        precheck_window(it.case, it.domain.n, it.exponents)
    return V.run_battery(inst, resolution=_res(cfg, 64), seed=cfg.seed)


def cmd_kernel_bounds(cfg):
    p = cfg.params
    doms = [_domain(d) for d in p.get("domains", [p["domain"]] if "domain" in p else
                                      ["UnitDisc", {"kind": "Ellipse", "params": [2.0, 1.0]}])]
    alphas = [float(a) for a in p.get("a", [0.25, 0.5, 1.0, 1.5, 2.0])]
    for dom in doms:
        for a in alphas:
            if not 0 < a <= dom.real_dim:
                raise WindowError("0<a<=N", f"a={a}, N={dom.real_dim}")
    count = int(p.get("targets", 50))
    out = []
    for dom in doms:
        tg = V.random_targets(dom, count, cfg.seed)
        for a in alphas:
            out += V.verify_kernel_bounds(dom, a, tg, _res(cfg, 64))
    return out


def cmd_kmh(cfg):
    p = cfg.params
    dom = _domain(p.get("domain"), make_domain("UnitDisc"))
    if "instances" in p:
        inst = [(_field(it["alpha"], dom.n), _weight(it.get("phi"), dom.n) or zero_weight())
                for it in p["instances"]]
    else:
        inst = V.kmh_instances(dom)
    return [V.verify_kmh_identity(dom, a, phi, _res(cfg, 64)) for a, phi in inst]


def cmd_sharpness(cfg):
    p = cfg.params
    dom = _domain(p.get("domain"))
    case = p.get("case")
    exps = _exponents(p.get("exponents", [2.0]))
    precheck_window(case, dom.n, exps)
    family = [_field(f, dom.n) for f in p.get("family", [])]
    w = _weight(p.get("weight"), dom.n)
    res = estimate_sharp_constant(case, dom, family, exps, make_weight(w) if w is not None else None,
                                  budget=int(p.get("budget", 5000)),
                                  restarts=int(p.get("restarts", 8)), seed=cfg.seed,
                                  resolution=_res(cfg, 64), form=p.get("form", "auto"))
    return [res]


def cmd_solve_dbar(cfg):
    p = cfg.params
    dom = _domain(p.get("domain"), make_domain("UnitDisc"))
    g = _field(p.get("g", {"family": "Constant", "c": 1.0}), dom.n)
    w = _weight(p.get("weight"), dom.n) or zero_weight()
    tol = float(p.get("tol", 1e-3))
    sol = solve_cauchy(dom, g, resolution=_res(cfg, 32), weight=w, tol=tol)
    msol = minimal_solution(sol, w, int(p.get("holo_degree", 20)))
    unit = C._report("unit", [C.ChainEntry("identity", 1.0)])
    rec = V._record("dbar_residual", sol.residual_sup, tol, unit, 0.0, 0.0,
                    {"g": g.to_dict(), "weight": w.to_dict(), "norm_sq": sol.norm_sq,
                     "minimal_norm_sq": msol.norm_sq, "truncation_gap": msol.truncation_gap,
                     "projection_coeffs": [complex(c) for c in msol.coeffs],
                     "grid_points": len(sol.grid), "resolution": _res(cfg, 32)})
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(("x", "y", "re_u", "im_u", "re_u_min", "im_u_min"))
    for (x, y), u, um in zip(sol.grid, sol.u, msol.u):
        wr.writerow([_fmt(float(x)), _fmt(float(y)), _fmt(u.real), _fmt(u.imag),
                     _fmt(um.real), _fmt(um.imag)])
    return [rec], {"dbar_grid.csv": buf.getvalue()}


def _hormander_instances(cfg):
    p = cfg.params
    if "instances" not in p:
        return hormander_instances()
    out = []
    for it in p["instances"]:
        dom = _domain(it.get("domain", p.get("domain")), make_domain("UnitDisc"))
        mode = it.get("mode", GENERAL)
        if mode not in (GENERAL, FIXED_PSI):
            raise ConfigurationError(f"unknown mode {mode!r}")
        q = it.get("q", "inf")
        q = math.inf if q in ("inf", "Infinity") else float(q)
        if not 2 * dom.n - 1 < q:
            raise WindowError("2n-1<q", f"n={dom.n}, q={q}")
        out.append(HormanderInstance(dom, _field(it["g"], dom.n),
                                     _weight(it.get("phi"), dom.n) or zero_weight(),
                                     _weight(it.get("psi"), dom.n), q, mode))
    return out


def cmd_hormander(cfg):
    inst = _hormander_instances(cfg)
    return [run_hormander(it, resolution=_res(cfg, 32)) for it in inst]


def cmd_selftest_bm(cfg):
    p = cfg.params
    res = _res(cfg, 128)
    disc = make_domain("UnitDisc")
    count = int(p.get("targets", 20))
    tol = float(p.get("tol", 1e-4))
    unit = C._report("unit", [C.ChainEntry("identity", 1.0)])
    rules = (interior_rule(disc, res), boundary_rule(disc, max(4 * res, 256)))
    tg = V.random_targets(disc, count, cfg.seed)
    out = []
    for f in reproduction_fields(1):
        rec = reconstruct_bm(disc, rules, f, tg)
        out.append(V._record("bm_reproduction", rec.max_abs_error, tol, unit, 0.0,
                             float(rec.errors.max()),
                             {"domain": "UnitDisc", "field": f.to_dict(), "resolution": res,
                              "targets": count}))
    if p.get("ball", False):
        ball = make_domain("UnitBall", n=2)
        samples = int(p.get("samples", 200000))
        rules = (interior_rule(ball, 32, samples=samples, seed=cfg.seed), boundary_rule(ball, 32))
        tgb = V.random_targets(ball, int(p.get("ball_targets", 5)), cfg.seed, max_rho=-0.2)
        for f in reproduction_fields(2):
            rec = reconstruct_bm(ball, rules, f, tgb)
            # the row passes when the error is within three standard errors
            se = np.maximum(rec.errors, 1e-300)
            z = float(np.max(np.abs(rec.values - rec.exact) / se))
            out.append(V._record("bm_reproduction_ball", z, 3.0, unit, 0.0, 0.0,
                                 {"domain": "UnitBall", "field": f.to_dict(), "samples": samples,
                                  "max_abs_error": rec.max_abs_error}))
    return out


def _read_rows(path):
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return [Row(**{c: (r[c] if c in ("tag", "verdict") else _num(r[c])) for c in COLUMNS})
                for r in data["records"]]
    with open(path, encoding="utf-8", newline="") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != COLUMNS:
            raise ConfigurationError(f"{path!r} does not have the report columns")
        return [Row(**{c: (r[c] if c in ("tag", "verdict") else _num(r[c])) for c in COLUMNS})
                for r in rd]


def _num(v):
    return float(v) if not isinstance(v, str) else float(v.replace("infinity", "inf"))


def cmd_report(cfg):
    inputs = cfg.params.get("inputs", [])
    if not inputs:
        raise UsageError("report needs 'inputs' (paths of earlier reports)")
    rows, summary = [], []
    for path in inputs:
        try:
            rs = _read_rows(path)
        except OSError as exc:
            raise UsageError(f"cannot read report {path!r}: {exc.strerror}") from None
        rows += rs
        counts = {v: sum(r.verdict == v for r in rs) for v in (V.PASS, V.INCONCLUSIVE, V.FAIL)}
        summary.append([os.path.basename(path), len(rs), counts[V.PASS], counts[V.INCONCLUSIVE],
                        counts[V.FAIL], min((r.margin for r in rs), default=math.nan)])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("source", "rows", "pass", "inconclusive", "fail", "min_margin"))
    for s in summary:
        w.writerow([s[0], s[1], s[2], s[3], s[4], _fmt(s[5])])
    return rows, {"summary.csv": buf.getvalue()}


HANDLERS = {
    "verify": cmd_verify, "kernel-bounds": cmd_kernel_bounds, "kmh": cmd_kmh,
    "sharpness": cmd_sharpness, "solve-dbar": cmd_solve_dbar, "hormander": cmd_hormander,
    "selftest-bm": cmd_selftest_bm, "report": cmd_report,
}


def run(cfg):
    """Run one experiment; returns ``(exit_status, rows, written_paths)``."""
    if cfg.command not in HANDLERS:
        raise UsageError(f"unknown command {cfg.command!r}")
    result = HANDLERS[cfg.command](cfg)
    records, extra = result if isinstance(result, tuple) else (result, {})
    os.makedirs(cfg.out, exist_ok=True)
    written = []
    path = os.path.join(cfg.out, f"{cfg.command}.{cfg.fmt}")
    emit_report(records, cfg.fmt, path)
    written.append(path)
    rows = [_as_row(r) for r in records]
    audit = {"command": cfg.command, "seed": cfg.seed, "resolution": cfg.resolution,
             "config": cfg.params, "records": [r.audit for r in rows],
             "status": exit_status(rows)}
    apath = os.path.join(cfg.out, f"{cfg.command}.audit.json")
    with open(apath, "w", encoding="utf-8", newline="") as fh:
        fh.write(_dumps(audit))
    written.append(apath)
    for name, text in extra.items():
        p = os.path.join(cfg.out, name)
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        written.append(p)
    return exit_status(rows), rows, written


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="dbar-poincare", description=__doc__.splitlines()[0])
    ap.add_argument("command", nargs="?", choices=COMMANDS,
                    help="what to run; may instead be given as 'command' in the config")
    ap.add_argument("--config", metavar="PATH", help="JSON experiment config")
    ap.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")
    ap.add_argument("--resolution", metavar="N", type=int, default=None,
                    help="quadrature resolution (default: config value or the command's default)")
    ap.add_argument("--seed", metavar="S", type=int, default=None,
                    help="random seed (default: config value or 0)")
    ap.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    ap.add_argument("--input", metavar="PATH", action="append", default=None,
                    help="report inputs for the 'report' command (repeatable)")
    return ap


def config_from_args(args):
    params = load_config(args.config) if args.config else {}
    if not isinstance(params, dict):
        raise ConfigurationError("config must be a JSON object")
    command = args.command or params.get("command")
    if command is None:
        raise UsageError("no command given")
    if args.command and params.get("command") not in (None, args.command):
        raise UsageError(f"command {args.command!r} conflicts with config command {params['command']!r}")
    if args.input:
        params = dict(params, inputs=list(params.get("inputs", [])) + args.input)
    resolution = args.resolution if args.resolution is not None else params.get("resolution")
    seed = args.seed if args.seed is not None else int(params.get("seed", 0))
    params = {k: v for k, v in params.items() if k not in ("command", "resolution", "seed")}
    return ExperimentConfig(command, params, resolution, seed, args.out, args.fmt)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits on bad usage and on --help
        return exc.code
    try:
        cfg = config_from_args(args)
        status, rows, written = run(cfg)
    except (ConfigurationError, ValueError, KeyError) as exc:
        reason = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(json.dumps({"error": type(exc).__name__, "reason": f"{reason}"}), file=sys.stderr)
        return EXIT_USAGE
    counts = {v: sum(r.verdict == v for r in rows) for v in (V.PASS, V.INCONCLUSIVE, V.FAIL)}
    print(f"{cfg.command}: {len(rows)} rows, {counts[V.PASS]} pass, "
          f"{counts[V.INCONCLUSIVE]} inconclusive, {counts[V.FAIL]} fail")
    for path in written:
        print(f"wrote {path}")
    if status != EXIT_PASS:
        bad = [r for r in rows if r.verdict != V.PASS]
        print(json.dumps({"reason": "verdicts", "rows": [[r.tag, r.verdict, r.margin] for r in bad[:20]]},
                         default=str), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
