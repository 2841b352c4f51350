"""Command-line entry point: ``fpvamp gen|solve|bench|selftest``.

Exit codes: 0 success, 1 no path (or a failed self-test), 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import BenchConfig, BenchRow, run_bench, write_csv
from .exceptions import InvalidSpec, NoPath, ParseError
from .grid_world import DomainKind, DomainSpec, generate, load_ascii, save_ascii
from .robot_geometry import RobotSpec
from .vamp_planner import PlannerConfig, Strategy, relaxed_vamp_search

EXIT_OK, EXIT_NO_PATH, EXIT_USAGE = 0, 1, 2


def _kind(text):
    try:
        return DomainKind.parse(text)
    except InvalidSpec as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _sizes(text):
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("--sizes needs at least one size")
    try:
        sizes = [int(t) for t in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise argparse.ArgumentTypeError("--sizes must be strictly ascending")
    return sizes


def _methods(text):
    methods = [t.strip().lower() for t in text.split(",") if t.strip()]
    valid = {s.value for s in Strategy}
    bad = [m for m in methods if m not in valid]
    if not methods or bad:
        raise argparse.ArgumentTypeError(f"methods must be a subset of {sorted(valid)}")
    return tuple(methods)


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpvamp", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a domain as an ASCII map")
    g.add_argument("--kind", type=_kind, required=True)
    g.add_argument("--size", type=_positive, required=True)
    g.add_argument("--width", type=_positive, default=11, help="hallway width (default 11)")
    g.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("solve", help="run the relaxed search on an ASCII map")
    s.add_argument("--map", type=Path, required=True)
    s.add_argument("--method", choices=[m.value for m in Strategy], default="fpnnt")
    s.add_argument("--m", type=_positive, default=32, dest="M")
    s.add_argument("--c-viol", type=float, default=100.0)
    s.add_argument("--csv", type=Path, help="also write the result as a one-row CSV")

    b = sub.add_parser("bench", help="baseline vs FPNNT scaling runs")
    b.add_argument("--kind", type=_kind, required=True)
    b.add_argument("--sizes", type=_sizes, required=True)
    b.add_argument("--trials", type=_positive, default=10)
    b.add_argument("--methods", type=_methods, default=("baseline", "fpnnt"))
    b.add_argument("--m", type=_positive, default=32, dest="M")
    b.add_argument("--width", type=_positive, default=11)
    b.add_argument("--out", type=Path, required=True)
    b.add_argument("--svg", action="store_true")
    b.add_argument("--parallel-trials", action="store_true")

    sub.add_parser("selftest", help="randomized checks against brute-force oracles")
    return p


def _cmd_gen(args) -> int:
    try:
        inst = generate(DomainSpec(args.kind, args.size, args.width))
    except InvalidSpec as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    args.out.write_text(save_ascii(inst))
    print(f"wrote {args.out} ({inst.grid.width}x{inst.grid.height})")
    return EXIT_OK


def _cmd_solve(args) -> int:
    try:
        inst = load_ascii(args.map.read_text())
    except (OSError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    cfg = PlannerConfig(c_viol=args.c_viol, strategy=Strategy(args.method), M=args.M)
    try:
        res = relaxed_vamp_search(inst, RobotSpec(), cfg)
    except NoPath as e:
        print(f"no path: {e}")
        return EXIT_NO_PATH
    st = res.stats
    print(f"method={args.method} steps={res.steps} violation_cells={res.total_violation_cells} "
          f"nodes_expanded={st.nodes_expanded} total_ms={st.total_time * 1e3:.1f} "
          f"find_vis_viol_ms={st.find_vis_viol_time * 1e3:.1f} logical_memory={st.logical_memory}")
    if args.csv:
        row = BenchRow(args.map.stem, max(inst.grid.width, inst.grid.height) - 2, args.method, args.M, 0,
                       round(st.total_time * 1e3, 3), round(st.find_vis_viol_time * 1e3, 3),
                       round(st.insert_time * 1e3, 3), st.nodes_expanded, res.steps,
                       res.total_violation_cells, st.logical_memory)
        write_csv([row], args.csv)
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = BenchConfig(args.kind, args.sizes, args.trials, args.methods, args.M, args.out,
                      args.svg, args.width, args.parallel_trials)
    try:
        rows = run_bench(cfg)
    except InvalidSpec as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    for r in rows:
        print(f"{r.domain} size={r.size} {r.method} trial={r.trial} total_ms={r.total_ms:.1f} "
              f"find_vis_viol_ms={r.find_vis_viol_ms:.1f} memory={r.logical_memory}")
    return EXIT_NO_PATH if any(r.steps < 0 for r in rows) else EXIT_OK


def _cmd_selftest(args) -> int:
    from .selftest import run_all

    ok = True
    for name, passed, detail in run_all():
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
        ok &= passed
    return EXIT_OK if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return {"gen": _cmd_gen, "solve": _cmd_solve, "bench": _cmd_bench,
            "selftest": _cmd_selftest}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
