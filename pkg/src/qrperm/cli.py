"""Command line: verify suites, scan conjectures, export b-files, resume checkpoints."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import runner
from .runner import SuiteOptions, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _run_options(sub: argparse.ArgumentParser, default_to: Optional[int] = None) -> None:
    sub.add_argument("--from", dest="lo", type=int, default=3, help="lower end of the range (default 3)")
    sub.add_argument("--to", dest="hi", type=int, default=default_to, required=default_to is None,
                     help="upper end of the range")
    sub.add_argument("--a", type=_int_list, default=None,
                     help="multipliers a, comma separated (default: 1 and the smallest non-residue)")
    sub.add_argument("--grid", type=int, default=None, help="half-width of the (a, b, c) grid")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    sub.add_argument("--out", default=None, help="JSONL file, one verdict per parameter")
    sub.add_argument("--report", default=None, help="write the deterministic run report as JSON")
    sub.add_argument("--checkpoint", default=None, help="checkpoint file, rewritten every 64 parameters")
    sub.add_argument("--tolerance", type=float, default=None, help="relative log tolerance for products")
    sub.add_argument("--limit", type=int, default=None, help="stop after this many parameters")
    sub.add_argument("--figure", default=None, help="render a PNG summary here")
    sub.add_argument("--quiet", action="store_true", help="summary only, no failure listing")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qrperm", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = subs.add_parser("verify", help="check a proven identity suite over a range")
    v.add_argument("suite", help="one of: " + ", ".join(runner.all_suites()))
    _run_options(v)
    v.add_argument("--halt", action="store_true", help="stop at the first failing parameter")

    s = subs.add_parser("scan", help="scan a conjecture for counterexamples")
    s.add_argument("conjecture", help="conjecture id, e.g. 6.2 or conj:6.2")
    _run_options(s)
    s.add_argument("--keep-going", action="store_true", help="do not stop at the first counterexample")
    s.add_argument("--ratio", action="store_true", help="also tabulate the ratio rows for 6.5")

    e = subs.add_parser("export", help="write an OEIS-style b-file")
    e.add_argument("sequence", help="one of: " + ", ".join(runner.SEQUENCES))
    e.add_argument("--from", dest="lo", type=int, default=3)
    group = e.add_mutually_exclusive_group(required=True)
    group.add_argument("--to", dest="hi", type=int, help="last prime considered")
    group.add_argument("--first", type=int, help="number of terms")
    e.add_argument("--out", required=True, help="b-file path")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--figure", default=None)

    r = subs.add_parser("resume", help="continue a checkpointed run")
    r.add_argument("checkpoint")
    r.add_argument("--suite", default=None, help="refuse to resume unless the checkpoint is this suite")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--limit", type=int, default=None)
    r.add_argument("--report", default=None)
    r.add_argument("--figure", default=None)
    r.add_argument("--quiet", action="store_true")
    return parser


def _finish(report: runner.RunReport, args: argparse.Namespace) -> int:
    lines = report.summary_lines()
    if getattr(args, "quiet", False):
        lines = [ln for ln in lines if not ln.startswith("FAIL ")]
    print("\n".join(lines))
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_json(), indent=1) + "\n", encoding="utf-8")
    if args.figure:
        from .plotting import report_figure
        report_figure(report, args.figure)
        print(f"figure {args.figure}")
    return EXIT_OK if report.ok else EXIT_FAIL


def _options(args: argparse.Namespace, ratio: bool = False) -> SuiteOptions:
    kw = {"a": args.a, "grid": args.grid, "ratio": ratio}
    if args.tolerance is not None:
        if not args.tolerance > 0:
            raise UsageError("tolerance must be positive")
        kw["tolerance"] = args.tolerance
    return SuiteOptions(**kw)


def _check_jobs(jobs: int) -> None:
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")


def cmd_verify(args: argparse.Namespace) -> int:
    _check_jobs(args.jobs)
    suite = runner.parse_suite(args.suite)
    report = runner.run_suite(suite, args.lo, args.hi, _options(args), jobs=args.jobs, out=args.out,
                              checkpoint=args.checkpoint, halt_on_failure=args.halt or None,
                              limit=args.limit)
    return _finish(report, args)


def cmd_scan(args: argparse.Namespace) -> int:
    _check_jobs(args.jobs)
    suite = runner.parse_suite(args.conjecture)
    if not suite.startswith("conj:"):
        raise UsageError(f"{args.conjecture!r} is not a conjecture id")
    report = runner.run_suite(suite, args.lo, args.hi, _options(args, ratio=args.ratio), jobs=args.jobs,
                              out=args.out, checkpoint=args.checkpoint,
                              halt_on_failure=not args.keep_going, limit=args.limit)
    return _finish(report, args)


def cmd_export(args: argparse.Namespace) -> int:
    _check_jobs(args.jobs)
    if args.first is not None and args.first < 0:
        raise UsageError("--first must be nonnegative")
    primes = runner.sequence_primes(args.sequence, args.lo, args.hi, args.first)
    values = runner.sequence_values(args.sequence, primes, args.jobs)
    Path(args.out).write_bytes(runner.bfile_text(values).encode("ascii"))
    print(f"{args.sequence}: {len(values)} terms -> {args.out}")
    if args.figure:
        from .plotting import sequence_figure
        sequence_figure(args.sequence, primes, values, args.figure)
        print(f"figure {args.figure}")
    return EXIT_OK


def cmd_resume(args: argparse.Namespace) -> int:
    _check_jobs(args.jobs)
    try:
        report = runner.resume(args.checkpoint, suite=args.suite, jobs=args.jobs, limit=args.limit)
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"corrupt checkpoint: {exc}") from exc
    return _finish(report, args)


COMMANDS = {"verify": cmd_verify, "scan": cmd_scan, "export": cmd_export, "resume": cmd_resume}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qrperm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qrperm: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
