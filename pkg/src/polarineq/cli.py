"""Command-line front end: single checks, grid campaigns, C_p tables,
extremal searches, and replay of saved search records.

Exit codes: 0 success/satisfied, 1 malformed input or configuration,
2 violation found, 3 hypotheses failed.

All file writes go through a single writer so outputs are deterministic;
the CSV summaries carry a config header without a timestamp, which keeps
rerun-with-same-seed outputs byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__, explorer, inequalities
from .circlequad import (CP_SPEC, DEFAULT_SPEC, INF, QuadratureSpec,
                         cp_constant, cp_constant_gamma)
from .explorer import (CATALOG, ExtremalRecord, ScanGrid, SearchConfig,
                       maximize_ratio, scan, sharpness_report)
from .families import FamilySpec
from .inequalities import HypothesisError, InequalityParams, InequalityReport
from .polycore import Polynomial, parse_complex

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_VIOLATION = 2
EXIT_HYPOTHESIS = 3

CP_TABLE_TOL = 1e-10

# short aliases accepted on the command line
ALIASES = {
    "main": "main_theorem",
    "lemma1": "lemma1_printed",
    "identity": "reciprocal_identity",
}


def _resolve_check(name: str) -> str:
    resolved = ALIASES.get(name, name)
    if resolved not in CATALOG:
        raise ValueError(f"unknown check {name!r}; known: {sorted(CATALOG)}")
    return resolved


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    return float(text)


def _load_polynomial(inline: Optional[str], path: Optional[str]) -> Polynomial:
    if (inline is None) == (path is None):
        raise ValueError("supply exactly one of --poly / --poly-file")
    if inline is not None:
        pairs = json.loads(inline)
    else:
        with open(path) as fh:
            obj = json.load(fh)
        pairs = obj["coeffs"] if isinstance(obj, dict) else obj
    return Polynomial(complex(re, im) for re, im in pairs)


def _header(args: argparse.Namespace, resolved_config: dict,
            with_timestamp: bool = True) -> dict:
    h = {
        "tool": "polarineq",
        "version": __version__,
        "command": args.command,
        "seed": resolved_config.get("seed"),
        "config": resolved_config,
    }
    if with_timestamp:
        h["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
    return h


def _quad_spec(args: argparse.Namespace) -> QuadratureSpec:
    return QuadratureSpec(
        start_nodes=DEFAULT_SPEC.start_nodes,
        max_nodes=args.max_nodes,
        rel_tol=args.quad_tol,
    )


def _report_csv_row(r: InequalityReport) -> str:
    return ",".join(str(v) for v in (
        r.name, r.polynomial.degree(), r.params.K, r.params.mu,
        "inf" if r.params.p == INF else r.params.p,
        abs(r.params.alpha), abs(r.params.beta),
        repr(r.lhs), repr(r.rhs), repr(r.ratio), repr(r.margin),
        r.satisfied, r.convention))


CSV_COLUMNS = "name,n,K,mu,p,abs_alpha,abs_beta,lhs,rhs,ratio,margin,satisfied,convention"


def _print_report(r: InequalityReport, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(r.to_json_dict(), indent=2))
    elif fmt == "csv":
        print(CSV_COLUMNS)
        print(_report_csv_row(r))
    else:
        print(f"check       : {r.name}")
        print(f"lhs         : {r.lhs:.12g}")
        print(f"rhs         : {r.rhs:.12g}")
        print(f"ratio       : {r.ratio:.12g}")
        print(f"margin      : {r.margin:.12g}")
        print(f"satisfied   : {r.satisfied}")
        print(f"convention  : {r.convention}")
        if r.worst_theta is not None:
            print(f"worst theta : {r.worst_theta:.12g}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_check(args: argparse.Namespace) -> int:
    name = _resolve_check(args.name)
    if args.name == "lemma1" and args.variant:
        name = f"lemma1_{args.variant}"
    P = _load_polynomial(args.poly, args.poly_file)
    spec = _quad_spec(args)
    alpha = parse_complex(args.alpha) if args.alpha else 0j
    beta = parse_complex(args.beta) if args.beta else 0j
    p = _parse_p(args.p) if args.p else 2.0
    params = InequalityParams(alpha=alpha, beta=beta, p=p, K=args.K, mu=args.mu)
    if name == "lemma2":
        if args.poly_q or args.poly_q_file:
            Q = _load_polynomial(args.poly_q, args.poly_q_file)
        else:
            Q = inequalities.default_lemma2_majorant(P, args.K)
        report = inequalities.check_lemma2(P, Q, alpha, beta, args.K, args.mu, spec)
    else:
        report = CATALOG[name].run(P, params, spec)
    _print_report(report, args.format)
    return EXIT_OK if report.satisfied else EXIT_VIOLATION


def cmd_scan(args: argparse.Namespace) -> int:
    with open(args.config) as fh:
        cfg = json.load(fh)
    check = _resolve_check(args.check or cfg["check"])
    grid_cfg = dict(cfg.get("grid", {}))
    if args.seed is not None:
        grid_cfg["seed"] = args.seed
    grid = ScanGrid.from_json_dict(grid_cfg)
    spec = _quad_spec(args)
    resolved = {"check": check, "grid": grid.to_json_dict(), "seed": grid.seed,
                "quad": {"max_nodes": spec.max_nodes, "rel_tol": spec.rel_tol}}

    reports = scan(check, grid, spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    jsonl_path = out / f"scan_{check}.jsonl"
    with open(jsonl_path, "w") as fh:
        fh.write(json.dumps({"header": _header(args, resolved)}) + "\n")
        for r in reports:
            fh.write(json.dumps(r.to_json_dict()) + "\n")

    csv_path = out / f"scan_{check}.csv"
    with open(csv_path, "w") as fh:
        fh.write(f"# polarineq {__version__} scan check={check} seed={grid.seed}\n")
        fh.write(CSV_COLUMNS + "\n")
        for r in reports:
            fh.write(_report_csv_row(r) + "\n")

    violations = sum(1 for r in reports if not r.satisfied)
    print(f"scan {check}: {len(reports)} reports, {violations} violations")
    print(f"wrote {jsonl_path} and {csv_path}")
    return EXIT_OK if violations == 0 else EXIT_VIOLATION


def cmd_cp_table(args: argparse.Namespace) -> int:
    ps = [_parse_p(tok) for tok in args.p.split(",")]
    rows = []
    for p in ps:
        quad = cp_constant(p, CP_SPEC)
        oracle = cp_constant_gamma(p)
        rows.append((p, quad, oracle, abs(quad - oracle)))
    print(f"{'p':>8}  {'C_p (quadrature)':>20}  {'C_p (Gamma oracle)':>20}  {'abs diff':>10}")
    for p, quad, oracle, diff in rows:
        ptxt = "inf" if p == INF else f"{p:g}"
        print(f"{ptxt:>8}  {quad:>20.15f}  {oracle:>20.15f}  {diff:>10.2e}")
    return EXIT_OK if all(d <= CP_TABLE_TOL for *_, d in rows) else EXIT_VIOLATION


def cmd_search(args: argparse.Namespace) -> int:
    with open(args.config) as fh:
        cfg = json.load(fh)
    check = _resolve_check(cfg["check"])
    family = FamilySpec.from_json_dict(cfg["family"])
    fixed_cfg = dict(cfg.get("fixed", {}))
    fixed: dict = {}
    for key in ("alpha", "beta"):
        if key in fixed_cfg:
            v = fixed_cfg[key]
            fixed[key] = complex(v[0], v[1]) if isinstance(v, list) else parse_complex(str(v))
    if "p" in fixed_cfg:
        fixed["p"] = _parse_p(str(fixed_cfg["p"]))
    sc_cfg = dict(cfg.get("search", {}))
    if args.seed is not None:
        sc_cfg["seed"] = args.seed
    config = SearchConfig(**sc_cfg)
    spec = _quad_spec(args)
    resolved = {"check": check, "family": family.to_json_dict(),
                "fixed": fixed_cfg, "search": config.to_json_dict(),
                "seed": config.seed}

    record = maximize_ratio(check, family, fixed, config, spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rec_path = out / f"search_{check}.json"
    with open(rec_path, "w") as fh:
        json.dump({"header": _header(args, resolved),
                   "record": record.to_json_dict()}, fh, indent=2)
    table = sharpness_report([record])
    (out / f"sharpness_{check}.csv").write_text(
        f"# polarineq {__version__} search check={check} seed={config.seed}\n"
        + table.to_csv())
    print(table.to_text())
    print(f"wrote {rec_path}")
    if record.best_ratio > 1 + 1e-9:
        print("WARNING: best ratio exceeds 1 — potential counterexample artifact")
        return EXIT_VIOLATION
    return EXIT_OK


def _record_from_json(obj: dict) -> ExtremalRecord:
    rec = obj["record"] if "record" in obj else obj
    arg = rec["argmax"]
    pr = arg["params"]
    p = pr["p"]
    params = InequalityParams(
        alpha=complex(*pr["alpha"]), beta=complex(*pr["beta"]),
        p=INF if p == "inf" else float(p), K=float(pr["K"]), mu=int(pr["mu"]))
    return ExtremalRecord(
        check_name=rec["check_name"], best_ratio=float(rec["best_ratio"]),
        polynomial=Polynomial.from_json_dict(arg["polynomial"]), params=params,
        iterations=int(rec["iterations"]), restarts=int(rec["restarts"]),
        trace_summary=tuple((int(i), float(r)) for i, r in rec["trace_summary"]))


def cmd_replay(args: argparse.Namespace) -> int:
    with open(args.record) as fh:
        record = _record_from_json(json.load(fh))
    report = explorer.replay(record, _quad_spec(args))
    drift = abs(report.ratio - record.best_ratio) / max(abs(record.best_ratio), 1e-300)
    print(f"stored ratio   : {record.best_ratio:.15g}")
    print(f"replayed ratio : {report.ratio:.15g}")
    print(f"relative drift : {drift:.3e}")
    ok = drift <= 1e-9 and report.ratio <= 1 + 1e-9
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# argument wiring

class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage, which collides with the violation exit
    code; malformed input is exit 1 here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _add_global_flags(ap: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags are accepted before and after the subcommand; the
    # per-subcommand copies use SUPPRESS so they never clobber root values
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    ap.add_argument("--seed", type=int, default=d(None), help="override config seed")
    ap.add_argument("--out", default=d("reports"), help="output directory")
    ap.add_argument("--format", choices=("json", "csv", "table"), default=d("table"))
    ap.add_argument("--quad-tol", type=float, default=d(DEFAULT_SPEC.rel_tol),
                    help="quadrature relative tolerance")
    ap.add_argument("--max-nodes", type=int, default=d(DEFAULT_SPEC.max_nodes),
                    help="quadrature node cap (power of two)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="polarineq",
        description="Numerical checks and sharpness exploration for polar-"
                    "derivative L^p inequalities on the unit circle.")
    _add_global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run one inequality check")
    _add_global_flags(c, suppress=True)
    c.add_argument("name", help=f"one of {sorted(CATALOG)} (aliases: {sorted(ALIASES)})")
    c.add_argument("--poly", help='inline coefficients [[re,im],...], ascending')
    c.add_argument("--poly-file", help="JSON file with {'coeffs': [[re,im],...]}")
    c.add_argument("--poly-q", help="inline majorant for lemma2")
    c.add_argument("--poly-q-file", help="majorant file for lemma2")
    c.add_argument("--alpha", help="complex scalar, e.g. '2', '1+2i'")
    c.add_argument("--beta", help="complex scalar with |beta| <= 1")
    c.add_argument("--p", help="exponent >= 1 or 'inf'")
    c.add_argument("--K", type=float, default=1.0, help="disk radius in (0,1]")
    c.add_argument("--mu", type=int, default=1, help="lacunary index")
    c.add_argument("--variant", choices=("printed", "proof"),
                   help="denominator variant for lemma1")
    c.set_defaults(fn=cmd_check)

    s = sub.add_parser("scan", help="run a grid campaign from a JSON config")
    _add_global_flags(s, suppress=True)
    s.add_argument("--config", required=True)
    s.add_argument("--check", help="override the config's check name")
    s.set_defaults(fn=cmd_scan)

    t = sub.add_parser("cp-table", help="C_p by quadrature vs Gamma closed form")
    _add_global_flags(t, suppress=True)
    t.add_argument("--p", required=True, help="comma-separated exponents, e.g. 1,2,4,inf")
    t.set_defaults(fn=cmd_cp_table)

    se = sub.add_parser("search", help="maximize lhs/rhs from a JSON config")
    _add_global_flags(se, suppress=True)
    se.add_argument("--config", required=True)
    se.set_defaults(fn=cmd_search)

    r = sub.add_parser("replay", help="re-verify a stored search record")
    _add_global_flags(r, suppress=True)
    r.add_argument("record", help="ExtremalRecord JSON file")
    r.set_defaults(fn=cmd_replay)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except HypothesisError as exc:
        print(f"hypotheses failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
