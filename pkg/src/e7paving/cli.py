"""Command-line interface.

Exit codes: 0 when every golden comparison passes, 1 on a mathematical
discrepancy, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cases import SCHEMA_VERSION, base_point, get_case, good_reduction, stabilizer_rank
from .cells import check_affine_paving, reports_table, reports_to_json, verify_blowup_case
from .counting import DEFAULT_HOLDOUTS, DEFAULT_PRIMES
from .report import (
    CASE_IDS,
    ConfigError,
    OutputWriter,
    RunConfig,
    analysis_files,
    analyze_case,
    bless,
    resolve_params,
    summary_report,
    write_outputs,
)

EXIT_OK, EXIT_DISCREPANCY, EXIT_CONFIG = 0, 1, 2


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--case", action="append", choices=CASE_IDS, help="case id (repeatable; default all)")
    common.add_argument("--primes", type=_int_list, default=DEFAULT_PRIMES, help="comma-separated primes")
    common.add_argument("--holdout", type=_int_list, default=DEFAULT_HOLDOUTS, help="comma-separated holdout primes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=32, help="random trials for the open-orbit test")
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--golden", type=Path, default=None, help="golden directory (default: packaged tables)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for counting")
    common.add_argument("--backend", choices=("compiled", "numpy"), default=None)
    common.add_argument("--format", choices=("json", "csv", "dot"), default=None)

    ap = argparse.ArgumentParser(prog="e7paving", description="Affine pavings of E7(a4) and E7(a5) Springer fibers")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list-cases", parents=[common], help="case ids, dimensions and stabilizer certificates")
    an = sub.add_parser("analyze", parents=[common], help="full analysis with golden comparison")
    an.add_argument("--bless", action="store_true", help="overwrite the golden tables with computed ones")
    ce = sub.add_parser("cells", parents=[common], help="per-cell report for one subspace")
    ce.add_argument("params", help='subspace parameters, e.g. "00|10|2|3" or "000|100|3"')
    sub.add_parser("graph", parents=[common], help="Gamma* as DOT (default) or JSON")
    sub.add_parser("blowup", parents=[common], help="blow-up identity for U = (100|200|2)")
    return ap


def _config(args) -> RunConfig:
    return RunConfig(
        cases=tuple(args.case) if args.case else CASE_IDS,
        primes=args.primes,
        holdouts=args.holdout,
        seed=args.seed,
        trials=args.trials,
        out=args.out,
        golden=args.golden,
        jobs=args.jobs,
        backend=args.backend,
    )


def _emit(text: str, out: Path | None, name: str):
    if out is None:
        sys.stdout.write(text)
    else:
        write_outputs({name: text}, out)
        print(f"wrote {Path(out) / name}")


def cmd_list_cases(cfg: RunConfig, args) -> int:
    rows = []
    for cid in cfg.cases:
        case = get_case(cid)
        rank = stabilizer_rank(case, base_point(case))
        rows.append({
            "case": cid,
            "dims": list(case.dims),
            "g0_dim": case.g0_dim,
            "g2_dim": case.g2_dim,
            "flag_dim": case.flag_dim,
            "flag_points": {str(q): case.flag_total(q) for q in cfg.primes},
            "stabilizer_rank": rank,
            "stabilizer_ok": rank == case.g0_dim,
            "bad_primes": [q for q in cfg.primes if not good_reduction(case, q)],
        })
    if args.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "cases": rows}, indent=2, sort_keys=True))
    else:
        for r in rows:
            status = "OK" if r["stabilizer_ok"] else "FAIL"
            print(f"{r['case']}: dims {tuple(r['dims'])}, dim g0 = {r['g0_dim']}, dim g2 = {r['g2_dim']}, "
                  f"flag dim {r['flag_dim']}, stabilizer rank {r['stabilizer_rank']} {status}, "
                  f"bad primes {r['bad_primes']}")
    return EXIT_OK if all(r["stabilizer_ok"] for r in rows) else EXIT_DISCREPANCY


def cmd_analyze(cfg: RunConfig, args) -> int:
    analyses = []
    formats = (args.format,) if args.format else ("json", "csv", "dot")
    writer = OutputWriter(cfg.out) if cfg.out is not None else None
    for cid in cfg.cases:
        a = analyze_case(cid, cfg)
        analyses.append(a)
        if writer:
            writer.add(analysis_files(a, formats))
        if args.bless:
            target = cfg.golden or Path(__file__).parent / "golden"
            for path in bless(a, target):
                print(f"blessed {path}")
    summary = summary_report(analyses)
    if writer:
        if "json" in formats:
            writer.add({"summary.json": json.dumps(summary, indent=2, sort_keys=True, ensure_ascii=False) + "\n"})
        writer.commit()
    for a in analyses:
        print(f"{a.case}: {'PASS' if a.passed else 'FAIL'} "
              f"({len(a.results)} subspaces, {len(a.graph.components)} components, {len(a.discrepancies)} discrepancies)")
        for d in a.discrepancies:
            print(f"  discrepancy: {d}")
        for n in a.notes:
            print(f"  note: {n}")
    if args.bless:
        return EXIT_OK
    return EXIT_OK if summary["passed"] else EXIT_DISCREPANCY


def cmd_cells(cfg: RunConfig, args) -> int:
    if len(cfg.cases) != 1:
        raise ConfigError("cells needs exactly one --case")
    case = get_case(cfg.cases[0])
    params = resolve_params(case, args.params)
    reports = check_affine_paving(case, params, cfg.cell_primes, backend=cfg.backend)
    if args.format == "json":
        _emit(reports_to_json(case, params, reports), cfg.out, f"{case.id.value}/cells_{params.label().replace('|', '_')}.json")
    else:
        _emit(reports_table(case, reports), cfg.out, f"{case.id.value}/cells_{params.label().replace('|', '_')}.txt")
    ok = all(r.classification in ("Empty", "Affine") for r in reports)
    return EXIT_OK if ok else EXIT_DISCREPANCY


def cmd_graph(cfg: RunConfig, args) -> int:
    from .graph import build_graph

    for cid in cfg.cases:
        g = build_graph(cid, trials=cfg.trials, seed=cfg.seed)
        if args.format == "json":
            _emit(g.to_json(), cfg.out, f"{cid}/graph.json")
        else:
            _emit(g.to_dot(), cfg.out, f"{cid}/graph.dot")
    return EXIT_OK


def cmd_blowup(cfg: RunConfig, args) -> int:
    primes = tuple(q for q in cfg.primes if q <= 7) or cfg.primes
    rep = verify_blowup_case(primes, cfg.backend)
    if args.format == "json":
        _emit(json.dumps(rep.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n", cfg.out, "E7a5/blowup.json")
    else:
        lines = [f"{'q':>3} {'|X_U|':>8} {'|Z_U|':>8} {'|L|':>5}  identity  cells"]
        for r in rep.rows:
            cells = all(v[0] == v[1] for v in r.cells.values())
            lines.append(f"{r.q:>3} {r.count_x:>8} {r.count_z:>8} {r.count_l:>5}  {str(r.identity_ok):<8}  {cells}")
        verdict = "not affine" if rep.exceptional_not_affine else "no non-affine witness"
        lines.append(f"cell a=21,S=231,T=123: counts {rep.exceptional_counts}, "
                     f"symbolic {rep.exceptional_symbolic} ({verdict})")
        _emit("\n".join(lines) + "\n", cfg.out, "E7a5/blowup.txt")
    return EXIT_OK if rep.ok else EXIT_DISCREPANCY


COMMANDS = {
    "list-cases": cmd_list_cases,
    "analyze": cmd_analyze,
    "cells": cmd_cells,
    "graph": cmd_graph,
    "blowup": cmd_blowup,
}


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        print("interrupted; partial outputs are left in the .partial-* directory", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
