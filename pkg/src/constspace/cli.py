"""Command-line front end.

Subcommands run one algorithm on a file (`center`, `center-line`,
`tree-centroid`, `tree-median`, `tree-1center`, `tree-2center`), check an
algorithm against its reference solver (`verify`), or produce scaling rows
(`bench`).  Results go to stdout as plain text or, with --json, as one stable
JSON object; instrumentation counters ride along either way.  Exit codes:
0 success, 1 verification mismatch, 2 bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from . import verification
from .fileio import FormatError, load_points, load_tree
from .geometry import OrientedLine
from .model import RegisterBank, metrics
from .verification import PROBLEMS, POINT_PROBLEMS, TOLERANCE


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--select", choices=("det", "rand"), default="rand",
                        help="selection strategy for the medians")
    parser.add_argument("--eps", type=float, default=1e-9,
                        help="relative tolerance for geometric predicates")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized selection and instances")
    parser.add_argument("--json", action="store_true", dest="as_json",
                        help="machine-readable output")
    parser.add_argument("--debug-region", action="store_true",
                        help="cross-check the feasible region per iteration")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="constspace",
        description="Constant-workspace center searches on points and trees.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    run_specs = [
        ("center", "Euclidean 1-center of a points file"),
        ("center-line", "Euclidean 1-center constrained to a line"),
        ("tree-centroid", "centroid of a tree file"),
        ("tree-median", "weighted median of a tree file"),
        ("tree-1center", "weighted 1-center of a tree file"),
        ("tree-2center", "weighted 2-center of a tree file"),
    ]
    for name, help_text in run_specs:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="points or tree file")
        if name == "center-line":
            p.add_argument("--line-x", type=float, default=None,
                           help="vertical line x = value")
            p.add_argument("--line", type=str, default=None,
                           help="general line as ax+by=c")
            p.add_argument("--sequential", action="store_true",
                           help="force forward-only input access")
        _common_flags(p)

    v = sub.add_parser("verify", help="run an algorithm against its reference")
    v.add_argument("problem", choices=PROBLEMS)
    v.add_argument("input", nargs="?", default=None,
                   help="instance file; omit to use random trials")
    v.add_argument("--trials", type=int, default=1)
    v.add_argument("--size", type=int, default=50)
    _common_flags(v)

    b = sub.add_parser("bench", help="scaling rows as CSV")
    b.add_argument("problem", choices=PROBLEMS)
    b.add_argument("--sizes", type=str, default="1024,4096,16384,65536")
    _common_flags(b)

    return top


_LINE_RE = re.compile(
    r"^\s*(?P<a>[+-]?[0-9.eE]*)\s*x\s*(?P<b>[+-]\s*[0-9.eE]*)\s*y\s*=\s*(?P<c>[+-]?[0-9.eE]+)\s*$"
)


def parse_line_spec(text: str) -> OrientedLine:
    m = _LINE_RE.match(text)
    if not m:
        raise FormatError(f"cannot parse line {text!r}; expected ax+by=c")

    def coeff(s: str, default: float = 1.0) -> float:
        s = s.replace(" ", "")
        if s in ("", "+"):
            return default
        if s == "-":
            return -default
        return float(s)

    a = coeff(m.group("a"))
    b = coeff(m.group("b"))
    c = float(m.group("c"))
    return OrientedLine.from_coefficients(a, b, c)


def _emit(problem: str, source: str, result: dict, bank: RegisterBank,
          as_json: bool) -> None:
    seq = result.pop("_seq", None)
    m = metrics(seq, bank)
    if as_json:
        payload = {
            "problem": problem,
            "input": source,
            "result": result,
            "metrics": m.as_dict(),
            "tolerance": TOLERANCE[problem],
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(verification.render_text(problem, result) + "\n")
        sys.stdout.write(
            f"# probes={m.probes} scans={m.scans} peak_registers={m.peak_registers}\n"
        )


def _cmd_run(args) -> int:
    problem = args.command
    strategy = verification.strategy_from_name(args.select, args.seed)
    bank = RegisterBank()
    if problem in POINT_PROBLEMS:
        data = load_points(args.input)
    else:
        data = load_tree(args.input)
    line = None
    sequential = False
    if problem == "center-line":
        if args.line is not None:
            line = parse_line_spec(args.line)
        else:
            line = OrientedLine.vertical(args.line_x if args.line_x is not None else 0.0)
        sequential = args.sequential
    observer = None
    if args.debug_region and problem in ("center", "center-line"):
        observer = _debug_observer(problem, data, line)
    result = verification.solve(
        problem, data, line=line, sequential=sequential,
        strategy=strategy, eps=args.eps, bank=bank, observer=observer,
    )
    _emit(problem, args.input, result, bank, args.as_json)
    return 0


def _debug_observer(problem, data, line):
    from . import bruteforce

    if problem == "center":
        rep = bruteforce.oracle_mec(data)
        return verification.region_contains_check(
            problem, point=(rep.witness[0], rep.witness[1])
        )
    frame = line or OrientedLine.vertical(0.0)
    rotated = [(frame.offset(p), frame.along(p)) for p in data]
    rep = bruteforce.oracle_constrained_center(rotated, 0.0)
    return verification.region_contains_check(problem, value=rep.witness[1])


def _cmd_verify(args) -> int:
    strategy = verification.strategy_from_name(args.select, args.seed)
    failures = 0
    outcomes = []
    if args.input is not None:
        data = (load_points(args.input) if args.problem in POINT_PROBLEMS
                else load_tree(args.input))
        instances = [(args.input, data)]
    else:
        instances = []
        for trial in range(args.trials):
            seed = args.seed + trial
            instances.append(
                (f"random(n={args.size}, seed={seed})",
                 verification.random_instance(args.problem, args.size, seed))
            )
    for source, data in instances:
        outcome = verification.verify_instance(
            args.problem, data, strategy=strategy, eps=args.eps,
            debug_region=args.debug_region,
        )
        outcomes.append((source, outcome))
        if not outcome.ok:
            failures += 1
    if args.as_json:
        payload = {
            "problem": args.problem,
            "trials": len(outcomes),
            "failures": failures,
            "tolerance": TOLERANCE[args.problem],
            "results": [
                {"input": s, "ok": o.ok, "algorithm": o.algorithm,
                 "reference": o.reference}
                for s, o in outcomes
            ],
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for source, o in outcomes:
            status = "ok" if o.ok else "MISMATCH"
            sys.stdout.write(
                f"{status} {args.problem} {source}: "
                f"algorithm={o.algorithm!r} reference={o.reference!r}\n"
            )
        sys.stdout.write(f"{len(outcomes) - failures}/{len(outcomes)} agreed\n")
    return 1 if failures else 0


def _cmd_bench(args) -> int:
    strategy = verification.strategy_from_name(args.select, args.seed)
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError as exc:
        raise FormatError(f"bad --sizes: {exc}") from exc
    sys.stdout.write("n,probes,scans,peak_registers,wall_ns\n")
    for n in sizes:
        data = verification.random_instance(args.problem, n, args.seed)
        bank = RegisterBank()
        start = time.perf_counter_ns()
        result = verification.solve(
            args.problem, data, strategy=strategy, eps=args.eps, bank=bank
        )
        wall = time.perf_counter_ns() - start
        m = metrics(result.pop("_seq", None), bank)
        sys.stdout.write(
            f"{n},{m.probes},{m.scans},{m.peak_registers},{wall}\n"
        )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_run(args)
    except FormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
