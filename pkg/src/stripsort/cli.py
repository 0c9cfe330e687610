"""Command-line entry point: ``stripsort <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 search budget
exhausted, 4 property violation found. Payloads go to stdout, diagnostics to
stderr.

Examples::

    stripsort analyze "2 5 6 3 7 8 9 4 1"
    stripsort reduce "4 1 3 2" | stripsort verify
    stripsort solve-ssd "4 1 3 2" --oracle bfs
    stripsort sweep --n 5 --deterministic --out runs/n5
    stripsort render "2 5 6 3 7 8 9 4 1"
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from stripsort import harness
from stripsort.moves import MoveError, Schedule
from stripsort.perm import (
    Permutation,
    PermutationError,
    lower_bound_rev,
    lower_bound_strips,
    parse_permutation,
    rev,
    strips,
)
from stripsort.reduction import (
    LAYOUTS,
    CompatibilityViolation,
    ConstraintCycle,
    GadgetInstance,
    ProjectionError,
    build_dagger,
    project_schedule,
    verify_instance,
)
from stripsort.render import FORMATS, render
from stripsort.solvers import (
    BudgetExhausted,
    block_bfs_oracle,
    bs_exact,
    ssd_bfs_oracle,
    ssd_exact,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BUDGET = 3
EXIT_VIOLATION = 4


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    if path.is_file():
        return path.read_text()
    return arg


def _perm(arg: str) -> Permutation:
    return parse_permutation(_read_source(arg))


def _json(arg: str) -> dict:
    text = _read_source(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{arg}: not JSON ({exc})") from None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- subcommands --------------------------------------------------------------------

def cmd_analyze(args) -> int:
    p = _perm(args.perm)
    d = strips(p)
    _emit({
        "perm": list(p.elements),
        "n": p.n,
        "strips": [list(p.elements[s.start:s.stop]) for s in d],
        "strip_count": d.count,
        "rev": rev(p).rev,
        "descent_positions": sorted(i + 1 for i in rev(p).descent_positions),
        "lb_rev": lower_bound_rev(p),
        "lb_strips": lower_bound_strips(p),
        "lower_bound": max(lower_bound_rev(p), lower_bound_strips(p)),
    })
    return EXIT_OK


def _solve(args, exact, oracle) -> int:
    p = _perm(args.perm)
    try:
        if args.oracle == "bfs":
            res = oracle(p, args.budget, timeout=args.timeout)
        else:
            res = exact(p, args.budget, timeout=args.timeout, transpositions=args.transpositions)
    except BudgetExhausted as exc:
        print(str(exc), file=sys.stderr)
        _emit({"distance": None, "status": "budget exhausted", "reason": exc.reason,
               "limit": exc.limit, "nodes": exc.nodes})
        return EXIT_BUDGET
    _emit(res.to_json())
    return EXIT_OK


def cmd_solve_ssd(args) -> int:
    return _solve(args, ssd_exact, ssd_bfs_oracle)


def cmd_solve_bs(args) -> int:
    return _solve(args, bs_exact, block_bfs_oracle)


def cmd_reduce(args) -> int:
    p = _perm(args.perm)
    inst = build_dagger(p, args.hinge_layout)
    if args.format == "ascii":
        sys.stdout.write(render(inst, "ascii"))
    else:
        _emit(inst.to_json())
    if args.constraints:
        Path(args.constraints).write_text(inst.constraints.to_text())
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        inst = GadgetInstance.from_json(_json(args.instance))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed instance: {exc}") from None
    report = verify_instance(inst)
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_project(args) -> int:
    inst = GadgetInstance.from_json(_json(args.instance))
    sched = Schedule.from_json(_json(args.schedule))
    try:
        out = project_schedule(inst, sched)
    except CompatibilityViolation as exc:
        print(f"compatibility violation: {exc}", file=sys.stderr)
        _emit({"error": "compatibility", "move": exc.index + 1, "reason": exc.reason})
        return EXIT_VIOLATION
    _emit(out.to_json())
    return EXIT_OK


def cmd_replay(args) -> int:
    sched = Schedule.from_json(_json(args.schedule))
    states = sched.trace()
    _emit({
        "start": list(sched.start.elements),
        "final": list(states[-1].elements),
        "identity": states[-1].is_identity(),
        "moves": len(sched),
        "strip_counts": [strips(s).count for s in states],
        "rev": [rev(s).rev for s in states],
    })
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.check_bounds:
        report = harness.check_bounds_exhaustive(args.n)
        _emit(report)
        return EXIT_VIOLATION if report["violations"] else EXIT_OK
    seed = args.seed
    if args.sample is not None and seed is None:
        seed = random.SystemRandom().randrange(2**32)
        print(f"seed {seed}", file=sys.stderr)
    try:
        report = harness.sweep_equivalence(
            args.n, args.sample, seed, timeout=args.timeout, layout=args.hinge_layout,
            deterministic=args.deterministic, workers=args.workers,
        )
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if args.out:
        report.write(args.out)
    if args.format == "json":
        sys.stdout.write(report.summary_json())
    else:
        sys.stdout.write(report.to_csv())
    s = report.summary()
    print(
        f"n={s['n']} rows={s['rows']} agree={s['verdicts']['agree']} "
        f"counterexamples={s['verdicts']['counterexample']} budget={s['verdicts']['budget']}",
        file=sys.stderr,
    )
    return EXIT_VIOLATION if report.counterexamples else EXIT_OK


def cmd_repro(args) -> int:
    report = harness.reproduce_worked_examples(timeout=args.timeout, layout=args.hinge_layout)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        ce = report["no_instance"].get("counterexample")
        if ce is not None:
            (out / "no_instance_counterexample.json").write_text(
                json.dumps(ce, indent=2, sort_keys=True) + "\n"
            )
    _emit(report)
    ok = all(section["pass"] for section in report.values())
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_render(args) -> int:
    text = _read_source(args.target).strip()
    target: object
    if text.startswith("{"):
        data = json.loads(text)
        if "tokens" in data:
            target = GadgetInstance.from_json(data)
        elif "moves" in data:
            target = Schedule.from_json(data)
        else:
            raise DataError("JSON is neither a gadget instance nor a schedule")
    else:
        target = parse_permutation(text)
        if args.dagger:
            target = build_dagger(target, args.hinge_layout)
    sys.stdout.write(render(target, args.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stripsort", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def perm_arg(p):
        p.add_argument("perm", help='permutation, e.g. "4 1 3 2"; a file path; or - for stdin')

    p = sub.add_parser("analyze", help="strips, descents and lower bounds")
    perm_arg(p)
    p.set_defaults(func=cmd_analyze)

    for name, func, what in (("solve-ssd", cmd_solve_ssd, "strip-swap"), ("solve-bs", cmd_solve_bs, "block-sorting")):
        p = sub.add_parser(name, help=f"exact {what} distance")
        perm_arg(p)
        p.add_argument("--budget", type=int, help="maximum schedule length to search")
        p.add_argument("--timeout", type=float, help="seconds before giving up")
        p.add_argument("--oracle", choices=("ida", "bfs"), default="ida")
        p.add_argument("--transpositions", action="store_true",
                       help="remember visited states within an iteration")
        p.add_argument("--deterministic", action="store_true",
                       help="sequential lexicographic search (the only mode implemented)")
        p.set_defaults(func=func)

    p = sub.add_parser("reduce", help="build pi-dagger")
    perm_arg(p)
    p.add_argument("--hinge-layout", choices=LAYOUTS, default="figure")
    p.add_argument("--format", choices=("json", "ascii"), default="json")
    p.add_argument("--constraints", metavar="FILE", help="also write the sorted constraint list")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a gadget instance's invariants")
    p.add_argument("instance", nargs="?", default="-", help="instance JSON file or - (default)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("project", help="project a swap schedule on pi-dagger to the source")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("replay", help="replay a schedule JSON")
    p.add_argument("schedule", nargs="?", default="-")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("sweep", help="theorem sweep over S_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--timeout", type=float, default=harness.DEFAULT_ROW_TIMEOUT,
                   help="per-search time limit in seconds")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--deterministic", action="store_true",
                   help="zero the timing column so output is byte-reproducible")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="DIR", help="write CSV, summary and counterexample bundles")
    p.add_argument("--hinge-layout", choices=LAYOUTS, default="figure")
    p.add_argument("--check-bounds", action="store_true",
                   help="check lower bounds and per-move bounds instead")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("repro", help="rerun the worked examples")
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--hinge-layout", choices=LAYOUTS, default="figure")
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("render", help="draw a permutation, instance or schedule")
    p.add_argument("target", help="permutation, instance/schedule JSON file, or -")
    p.add_argument("--format", choices=FORMATS, default="ascii")
    p.add_argument("--dagger", action="store_true", help="render pi-dagger of the permutation")
    p.add_argument("--hinge-layout", choices=LAYOUTS, default="figure")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PermutationError, MoveError, ProjectionError, ConstraintCycle, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BudgetExhausted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
