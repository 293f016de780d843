"""Command line entry point.

Exit codes: 0 pass or feasible, 2 infeasible, 3 malformed input, 4 internal
invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from .graph import HypothesisReport, LabeledGraph, StructuralError, synthesize_good_function, \
    validate_hypotheses
from .handles import LabelError
from .morse import InvariantError, assemble, plan_reeb_dot
from .reeb import BACKEND, compute_reeb, graph_dot, reeb_dot
from .surface import TriangulatedSurface, realize_surface
from .verify import SCHEMA_VERSION, verify_graph

EXIT_OK, EXIT_INFEASIBLE, EXIT_MALFORMED, EXIT_BUG = 0, 2, 3, 4


class Malformed(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise Malformed(f"cannot read {path}: {exc}") from None


def _read_graph(path: str, dim: Optional[int]) -> LabeledGraph:
    return LabeledGraph.from_json(_read_json(path), dimension=dim)


def _plan_or_report(graph: LabeledGraph):
    result = assemble(graph)
    if isinstance(result, HypothesisReport):
        return None, result
    return result, None


def _infeasible(report: HypothesisReport, out: Optional[str]) -> int:
    _emit(_dump({"schema_version": SCHEMA_VERSION, **report.to_json()}), out)
    for v in report.violations:
        print(f"violation {v.rule}: {v.message}", file=sys.stderr)
    return EXIT_MALFORMED if report.structural else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    report = validate_hypotheses(_read_graph(args.input, args.dim))
    if not report.feasible:
        return _infeasible(report, args.out)
    _emit(_dump({"schema_version": SCHEMA_VERSION, **report.to_json()}), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    graph = _read_graph(args.input, args.dim)
    ranks = synthesize_good_function(graph)
    if not ranks:
        _emit(_dump({"schema_version": SCHEMA_VERSION, "feasible": False,
                     "reason": ranks.reason}), args.out)
        print(f"infeasible: {ranks.reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(_dump(graph.with_heights(ranks).to_json()), args.out)
    return EXIT_OK


def cmd_plan(args) -> int:
    plan, report = _plan_or_report(_read_graph(args.input, args.dim))
    if report is not None:
        return _infeasible(report, args.out)
    _emit(_dump({"schema_version": SCHEMA_VERSION, **plan.to_json()}), args.out)
    return EXIT_OK


def cmd_realize(args) -> int:
    graph = _read_graph(args.input, args.dim)
    if graph.dimension != 2:
        raise Malformed(f"realize2d needs dimension 2, got {graph.dimension}")
    plan, report = _plan_or_report(graph)
    if report is not None:
        return _infeasible(report, args.out)
    _emit(_dump(realize_surface(plan).to_json()), args.out)
    return EXIT_OK


def cmd_reeb(args) -> int:
    mesh = TriangulatedSurface.from_json(_read_json(args.input))
    _emit(_dump(compute_reeb(mesh).to_json()), args.out)
    return EXIT_OK


def _verify_one(path: str, args) -> tuple[int, dict]:
    try:
        graph = _read_graph(path, args.dim)
    except (Malformed, StructuralError) as exc:
        return EXIT_MALFORMED, {"schema_version": SCHEMA_VERSION, "input": path,
                                "verdict": "malformed", "error": str(exc)}
    report = verify_graph(graph, full=args.full)
    doc = {"input": path, **report.to_json(timings=args.timings)}
    if report.hypotheses is not None and not report.hypotheses.feasible:
        doc["verdict"] = "infeasible"
        code = EXIT_MALFORMED if report.hypotheses.structural else EXIT_INFEASIBLE
        return code, doc
    return (EXIT_OK if report.passed else EXIT_BUG), doc


def cmd_verify(args) -> int:
    if args.dir:
        paths = sorted(str(p) for p in Path(args.dir).glob("*.json"))
        if args.input:
            paths.insert(0, args.input)
        results = [_verify_one(p, args) for p in paths]
        _emit(_dump({"schema_version": SCHEMA_VERSION,
                     "reports": [doc for _, doc in results]}), args.out)
        return max((code for code, _ in results), default=EXIT_OK)
    if not args.input:
        raise Malformed("verify needs an input file or --dir")
    code, doc = _verify_one(args.input, args)
    _emit(_dump(doc), args.out)
    for stage in doc.get("stages", ()):
        if not stage["passed"] and stage["stage"] != "hypotheses":
            print(f"stage {stage['stage']} failed", file=sys.stderr)
    for v in doc.get("stages", [{}])[0].get("details", {}).get("violations", ()):
        print(f"violation {v['rule']}: {v['message']}", file=sys.stderr)
    return code


def cmd_dot(args) -> int:
    obj = _read_json(args.input)
    if isinstance(obj, dict) and "triangles" in obj:
        _emit(reeb_dot(compute_reeb(TriangulatedSurface.from_json(obj))), args.out)
        return EXIT_OK
    graph = LabeledGraph.from_json(obj, dimension=args.dim)
    if args.plan:
        plan, report = _plan_or_report(graph)
        if report is not None:
            return _infeasible(report, args.out)
        _emit(plan_reeb_dot(plan), args.out)
    else:
        _emit(graph_dot(graph), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from . import selftest

    start = time.perf_counter()
    results = selftest.run(seed=args.seed, full=args.full)
    doc = {"schema_version": SCHEMA_VERSION, "seed": args.seed, "backend": BACKEND,
           "suites": [r.to_json() for r in results],
           "verdict": "pass" if all(r.passed for r in results) else "fail"}
    if args.timings:
        doc["seconds"] = round(time.perf_counter() - start, 3)
    _emit(_dump(doc), args.out)
    return EXIT_OK if doc["verdict"] == "pass" else EXIT_BUG


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reebreal",
                                description="Realize labeled graphs as Reeb graphs and verify them.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, input_required=True):
        sp = sub.add_parser(name, help=help_)
        if input_required:
            sp.add_argument("input", help="input JSON file, or - for standard input")
        sp.add_argument("--out", help="write the result here instead of standard output")
        sp.add_argument("--dim", type=int, help="override the dimension m of the input graph")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check the hypotheses on a labeled graph")
    add("synth-g", cmd_synth, "find heights satisfying the hypotheses")
    add("plan", cmd_plan, "assemble the Morse function plan")
    add("realize2d", cmd_realize, "triangulate the m=2 realization")
    add("reeb", cmd_reeb, "extract the Reeb graph of a mesh")
    sp = add("verify", cmd_verify, "run every applicable verification stage",
             input_required=False)
    sp.add_argument("input", nargs="?", help="input JSON file")
    sp.add_argument("--dir", help="verify every *.json file in this directory")
    sp.add_argument("--full", action="store_true", help="include the realized mesh in the report")
    sp.add_argument("--timings", action="store_true", help="add per-stage timings")
    sp = add("export-dot", cmd_dot, "write a graph, plan or mesh Reeb graph as DOT")
    sp.add_argument("--plan", action="store_true", help="export the assembled plan's adjacency")
    sp = add("selftest", cmd_selftest, "run the seeded oracle suites", input_required=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--full", action="store_true", help="run the full-size suites")
    sp.add_argument("--timings", action="store_true", help="add the wall-clock time")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Malformed, StructuralError, LabelError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except InvariantError as exc:
        print(f"internal invariant failed: {exc.invariant}: {exc}", file=sys.stderr)
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
