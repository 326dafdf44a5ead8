"""Command-line interface: solve problems, validate files, run the baseline
solvers, emit the bundled fixtures, and start the session service.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .baselines import UnsupportedProblem, ac3_solve, backtrack_solve, static_project
from .engine import Mode, Polarity, RunStats, Solution, Task, execute_task, solve
from .fixtures import build_car_fixture, build_mackworth_fixture
from .language import DmcError, parse, serialize
from .model import validate
from .trail import Trail

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_BAD_INPUT = 2


def _load_network(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None
    try:
        doc = parse(text)
    except DmcError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return None
    network = doc.to_network()
    problems = validate(network)
    if problems:
        for p in problems:
            print(f"error: {path}: {p}", file=sys.stderr)
        return None
    return network


def _parse_task(spec: str) -> Task:
    polarity, _, cid = spec.partition(":")
    if polarity not in ("satisfy", "unsatisfy") or not cid:
        raise ValueError(f"expected (satisfy|unsatisfy):CONSTRAINT, got {spec!r}")
    return Task(cid, Polarity.SATISFY if polarity == "satisfy" else Polarity.UNSATISFY)


def _stats_payload(stats: RunStats) -> dict:
    return {
        "assignments": stats.assignments,
        "backtracks": stats.backtracks,
        "constraintChecks": stats.constraint_checks,
        "solutions": stats.solutions,
        "trail": {
            "min": stats.trail.min,
            "max": stats.trail.max,
            "average": stats.trail.average,
        },
    }


def _print_stats(stats_payload: dict, form: str) -> None:
    if form == "json":
        print(json.dumps(stats_payload, indent=2))
    else:
        trail = stats_payload.pop("trail", None)
        for key, value in stats_payload.items():
            print(f"{key}: {value}")
        if trail is not None:
            print(f"trail records per constraint: min {trail['min']} "
                  f"max {trail['max']} average {trail['average']:.2f}")


def _solution_lines(solutions: list[Solution]) -> list[str]:
    return [" ".join(f"{vid}={val}" for vid, val in sol.assignment) for sol in solutions]


def _cmd_solve(args) -> int:
    network = _load_network(args.file)
    if network is None:
        return EXIT_BAD_INPUT
    try:
        tasks = [_parse_task(args.task)] + [_parse_task(t) for t in args.then]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    trail = Trail()
    for pre in tasks[:-1]:
        if pre.constraint not in network.constraints:
            print(f"error: unknown constraint {pre.constraint}", file=sys.stderr)
            return EXIT_BAD_INPUT
        if not execute_task(network, trail, pre):
            print(f"task failed: {pre.polarity.value}:{pre.constraint}", file=sys.stderr)
            return EXIT_NO_SOLUTION
    mode = Mode.ALL if args.all else Mode.FIRST
    try:
        solutions, stats = solve(network, trail, tasks[-1], mode)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    lines = _solution_lines(solutions)
    if args.solutions:
        with open(args.solutions, "w") as fh:
            fh.write("".join(line + "\n" for line in lines))
    else:
        for line in lines:
            print(line)
    print(f"{len(solutions)} solution(s)")
    if args.stats:
        _print_stats(_stats_payload(stats), args.stats)
    if mode is Mode.FIRST and not solutions:
        return EXIT_NO_SOLUTION
    return EXIT_OK


def _cmd_validate(args) -> int:
    network = _load_network(args.file)
    if network is None:
        return EXIT_BAD_INPUT
    print("ok")
    return EXIT_OK


def _cmd_baseline(args) -> int:
    network = _load_network(args.file)
    if network is None:
        return EXIT_BAD_INPUT
    try:
        csp = static_project(network)
        if args.solver == "bt":
            solutions, stats = backtrack_solve(csp)
            payload = {
                "assignments": stats.assignments,
                "backtracks": stats.backtracks,
                "constraintChecks": stats.constraint_checks,
                "solutions": len(solutions),
            }
            print(f"{len(solutions)} solution(s)")
        else:
            result = ac3_solve(csp)
            payload = {
                "consistent": result.consistent,
                "reviseCalls": result.revise_calls,
                "domains": result.domains,
            }
            print("consistent" if result.consistent else "inconsistent (domain wipeout)")
    except UnsupportedProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.stats:
        _print_stats(payload, args.stats)
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    doc = build_car_fixture() if args.name == "car" else build_mackworth_fixture()
    text = serialize(doc)
    with open(args.path, "w") as fh:
        fh.write(text)
    print(f"wrote {args.path}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port if args.port is not None else int(os.environ.get("DMC_PORT", "8000"))
    uvicorn.run(create_app(), host=args.host, port=port, log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="dmc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("file")
    p.add_argument("--task", required=True, help="(satisfy|unsatisfy):CONSTRAINT")
    p.add_argument("--then", action="append", default=[],
                   help="additional task, applied after the previous ones; "
                        "all but the last commit their first consistent branch")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--all", action="store_true", help="enumerate all solutions")
    group.add_argument("--first", action="store_true", help="stop at the first solution")
    p.add_argument("--stats", choices=["text", "json"])
    p.add_argument("--solutions", help="write solutions to this file, one per line")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("validate", help="parse and validate a problem file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("baseline", help="run a reference solver on a static problem")
    p.add_argument("solver", choices=["bt", "ac3"])
    p.add_argument("file")
    p.add_argument("--stats", choices=["text", "json"])
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("fixtures", help="emit a bundled fixture")
    p.add_argument("action", choices=["emit"])
    p.add_argument("name", choices=["car", "mackworth"])
    p.add_argument("path")
    p.set_defaults(func=_cmd_fixtures)

    p = sub.add_parser("serve", help="start the interactive session service")
    p.add_argument("--port", type=int, default=None,
                   help="listen port (falls back to DMC_PORT, then 8000)")
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
