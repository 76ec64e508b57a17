"""Command-line entry point.

Exit codes: 0 success, 2 usage or input error, 3 no plan fits the spare
budget, 4 instance too large for an exhaustive method.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .exact import CapacityError, RepairPlan, expand_to_dnf, select_repair_plan
from .experiment import ExperimentConfig, atomic_write, export_report, run_batch
from .model import (
    FaultMatrix,
    ParseError,
    SpareBudget,
    TileConfig,
    fault_coords,
    parse_faultlist,
    parse_grid,
    render_ascii,
)
from .tiles import BandAxis, solve_tiles

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_CAPACITY = 4


class UsageError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition(":")
        bounds = (int(lo), int(hi or lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return bounds


def _ids(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load(path: str, fmt: str) -> tuple[FaultMatrix, TileConfig]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    parser = parse_grid if fmt == "grid" else parse_faultlist
    return parser(text)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        atomic_write(Path(output), text)
    else:
        sys.stdout.write(text)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, metavar="FILE", help="matrix file")
    p.add_argument(
        "--input-format", choices=["grid", "faultlist"], default="grid",
        help="matrix file layout (default: grid)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpga-repair", description="Spare allocation for faulty FPGA logic blocks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    repair = sub.add_parser("repair", help="compute a repair plan")
    repair_sub = repair.add_subparsers(dest="method", required=True)

    lines = repair_sub.add_parser("lines", help="exact minimum spare row/column cover")
    _add_input(lines)
    lines.add_argument("--spare-cols", type=int, required=True)
    lines.add_argument("--spare-rows", type=int, required=True)
    lines.add_argument("--spare-col-ids", type=_ids, help="explicit spare column ids, e.g. 11,12,13")
    lines.add_argument("--spare-row-ids", type=_ids, help="explicit spare row ids")
    lines.add_argument("--all-solutions", action="store_true", help="also list every irredundant cover")
    lines.add_argument("--max-faults", type=int, default=24, help="exact solver fault cap (default: 24)")
    lines.add_argument("--format", choices=["json", "text"], default="text")
    lines.add_argument("--output", metavar="FILE")

    tiles = repair_sub.add_parser("tiles", help="greedy n x n spare tile cover")
    _add_input(tiles)
    tiles.add_argument("--strategy", choices=["auto", "rows", "cols"], default="auto")
    tiles.add_argument("--tile", type=int, help="tile side, overriding the file header")
    tiles.add_argument("--pad", action="store_true", help="zero-pad dimensions up to a multiple of the tile side")
    tiles.add_argument("--format", choices=["json", "text"], default="text")
    tiles.add_argument("--output", metavar="FILE")

    exp = sub.add_parser("experiment", help="seeded criterion validation batch")
    exp.add_argument("--trials", type=int, default=200)
    exp.add_argument("--p", type=_range, default=(3, 7), metavar="LO:HI", help="tile rows (default 3:7)")
    exp.add_argument("--q", type=_range, default=(3, 7), metavar="LO:HI", help="tile columns (default 3:7)")
    exp.add_argument("--n", type=_range, default=(2, 5), metavar="LO:HI", help="tile side (default 2:5)")
    exp.add_argument("--k-min", type=int, default=3)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--out", metavar="PREFIX", help="write PREFIX.csv and PREFIX.json")

    render = sub.add_parser("render", help="draw a matrix as text")
    _add_input(render)
    render.add_argument("--tile", type=int, help="tile side, overriding the file header")
    render.add_argument("--overlay", choices=["none", "tiles"], default="none")
    render.add_argument("--output", metavar="FILE")
    return parser


def _repair_lines(args: argparse.Namespace) -> int:
    m, _ = _load(args.input, args.input_format)
    try:
        budget = SpareBudget(args.spare_cols, args.spare_rows, args.spare_col_ids, args.spare_row_ids)
        faults = fault_coords(m)
        plan = select_repair_plan(faults, budget, shape=(m.rows, m.cols), cap=args.max_faults)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if args.format == "json":
        report = plan.to_dict()
        if args.all_solutions:
            dnf = expand_to_dnf(plan.cnf, plan.table, cap=args.max_faults) if plan.table else [0]
            report["all_solutions"] = [[str(ln) for ln in plan.lines(t)] for t in dnf]
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = _lines_text(plan, args.all_solutions, args.max_faults)
    _emit(text, args.output)
    if not plan.feasible:
        print(
            f"no cover fits {args.spare_cols} spare columns and {args.spare_rows} spare rows; "
            f"smallest cover needs {' '.join(map(str, plan.lines()))}",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    return EXIT_OK


def _lines_text(plan: RepairPlan, all_solutions: bool, cap: int) -> str:
    out = [f"faults: {len(plan.table.faults) if plan.table else 0}"]
    if plan.table:
        out.append("cnf: " + " ".join(str(c) for c in plan.cnf))
    out.append("minimum covers:")
    out += ["  " + (" ".join(map(str, plan.lines(t))) or "(none needed)") for t in plan.all_minimum]
    out.append(f"chosen: {' '.join(map(str, plan.lines())) or '(none needed)'}")
    out.append(f"feasible: {'yes' if plan.feasible else 'no'}")
    for r in plan.readdress:
        out.append(f"readdress {r.source} -> {r.target}")
    out.append(f"cost estimate: {plan.cost_estimate}")
    if all_solutions and plan.table:
        out.append("all irredundant covers:")
        out += ["  " + " ".join(map(str, plan.lines(t))) for t in expand_to_dnf(plan.cnf, plan.table, cap=cap)]
    return "\n".join(out) + "\n"


def _tile_matrix(args: argparse.Namespace) -> tuple[FaultMatrix, int]:
    m, cfg = _load(args.input, args.input_format)
    n = args.tile or cfg.n
    if n < 1:
        raise UsageError("tile side must be positive")
    if getattr(args, "pad", False):
        m = m.padded(n)
    return m, n


def _repair_tiles(args: argparse.Namespace) -> int:
    m, n = _tile_matrix(args)
    forced = {"auto": None, "rows": BandAxis.ROWS, "cols": BandAxis.COLS}[args.strategy]
    try:
        result = solve_tiles(m, n, forced)
    except ValueError as exc:
        raise UsageError(f"{exc} (use --pad to zero-pad)") from None
    if args.format == "json":
        text = json.dumps(result.to_dict(), indent=2) + "\n"
    else:
        quality = result.quality
        text = (
            f"q_r: {float(result.q_r):.4f} ({result.q_r})\n"
            f"q_c: {float(result.q_c):.4f} ({result.q_c})\n"
            f"strategy: {result.strategy.value}\n"
            f"spares used: {result.spares_used}\n"
            f"spares with other strategy: {result.spares_other_strategy}\n"
            f"faulty blocks: {result.fault_total}\n"
            f"quality: {'n/a' if quality is None else f'{float(quality):.4f}'}\n"
            + render_ascii(m, TileConfig(n), result)
        )
    _emit(text, args.output)
    return EXIT_OK


def _experiment(args: argparse.Namespace) -> int:
    try:
        cfg = ExperimentConfig(args.trials, args.p, args.q, args.n, args.k_min, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary, records = run_batch(cfg)
    if args.out:
        try:
            export_report(records, summary, args.out)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return 1
    sys.stdout.write(json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _render(args: argparse.Namespace) -> int:
    m, n = _tile_matrix(args)
    overlay = None
    if args.overlay == "tiles":
        try:
            overlay = solve_tiles(m, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _emit(render_ascii(m, TileConfig(n), overlay), args.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    handlers = {"experiment": _experiment, "render": _render}
    handler = handlers.get(args.command) or (_repair_lines if args.method == "lines" else _repair_tiles)
    try:
        return handler(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def dispatch(argv: Sequence[str]) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
