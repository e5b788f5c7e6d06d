"""Command line front end: ``datesafe analyze|run|litmus``."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import lang as L
from . import litmus
from .analyzer import DEFAULT_CAP, AnalysisError, analyze_program, render_report
from .core import RoundingMode, render
from .interp import DEFAULT_YEAR_RANGE, run, run_double

EXIT_OK, EXIT_UNPROVEN, EXIT_ERROR = 0, 1, 2


def _year_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"empty year range {text!r}")
    return lo_i, hi_i


def _cap(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("the partition cap must be at least 1")
    return n


def _load(path: str) -> L.Program:
    with open(path, encoding="utf-8") as fh:
        return L.parse(fh.read())


def _diag(path: str, line: int, col: int, message: str) -> None:
    print(f"{path}:{line}:{col}: error: {message}", file=sys.stderr)


def cmd_analyze(args) -> int:
    try:
        program = _load(args.file)
        rep = analyze_program(program, file=args.file, max_partitions=args.max_partitions, year_range=args.year_range)
    except L.ParseError as exc:
        _diag(args.file, exc.line, exc.col, exc.message)
        return EXIT_ERROR
    except AnalysisError as exc:
        _diag(args.file, exc.line, exc.col, str(exc))
        return EXIT_ERROR
    sys.stdout.write(render_report(rep, args.format, args.unicode))
    return rep.exit_code


def cmd_run(args) -> int:
    try:
        program = _load(args.file)
    except L.ParseError as exc:
        _diag(args.file, exc.line, exc.col, exc.message)
        return EXIT_ERROR
    yr = args.year_range or DEFAULT_YEAR_RANGE
    if args.mode == "double":
        res = run_double(program, args.seed, yr)
        for name in res.env_up:
            up, down = res.env_up[name], res.env_down[name]
            shown = render(up) if up == down else f"{render(up)} (up) / {render(down)} (down)"
            print(f"{name} = {shown}")
        outcomes, error = res.asserts, None
    else:
        res1 = run(program, RoundingMode(args.mode), args.seed, yr)
        for name, v in res1.env.items():
            print(f"{name} = {render(v)}")
        outcomes, error = res1.asserts, res1.error
        res = res1
    for a in outcomes:
        print(f"line {a.line}: assert {'passed' if a.passed else 'FAILED'}")
    if not res.feasible:
        print("an assume does not hold; the run stops there")
    if error is not None:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_UNPROVEN
    return EXIT_OK if all(a.passed for a in outcomes) else EXIT_UNPROVEN


def cmd_litmus(args) -> int:
    if args.action == "export":
        sys.stdout.write(litmus.export_cases())
        return EXIT_OK
    if args.action == "table":
        sys.stdout.write(litmus.table_csv())
        return EXIT_OK
    if args.action == "adapter":
        litmus.self_adapter(sys.stdin, sys.stdout, args.mode)
        return EXIT_OK
    try:
        if args.action == "classify":
            with open(args.results, encoding="utf-8") as fh:
                results = litmus.parse_results(fh)
        else:
            if not args.command:
                print("error: no adapter command given", file=sys.stderr)
                return EXIT_ERROR
            results = litmus.run_adapter(args.command)
        print(litmus.classify(results))
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="datesafe", description="Rounding-insensitivity checks for date arithmetic.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("analyze", help="prove or refute sync assertions statically")
    a.add_argument("--max-partitions", type=_cap, default=DEFAULT_CAP)
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--unicode", action="store_true", help="use arrows instead of u./d. prefixes")
    a.add_argument("--year-range", type=_year_range, default=None, metavar="LO..HI")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("run", help="execute a program once")
    r.add_argument("--mode", choices=("up", "down", "abort", "double"), default="double")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--year-range", type=_year_range, default=None, metavar="LO..HI")
    r.add_argument("file")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("litmus", help="litmus cases and rounding classification")
    tsub = t.add_subparsers(dest="action", required=True)
    e = tsub.add_parser("export", help="print the case list")
    e.add_argument("--json", action="store_true", help="JSON output (the only format)")
    tsub.add_parser("table", help="CSV table of expected results per mode")
    c = tsub.add_parser("classify", help="classify adapter output")
    c.add_argument("results", help="JSON lines file of {id, result}")
    d = tsub.add_parser("adapter", help="reference adapter over date-core")
    d.add_argument("--mode", choices=("up", "down", "abort", "posix"), default="down")
    x = tsub.add_parser("run", help="run an adapter command and classify it")
    x.add_argument("command", nargs=argparse.REMAINDER)
    t.set_defaults(func=cmd_litmus)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) and args.command[0] == "--":
        args.command = args.command[1:]
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
