"""End-to-end verification of a labeled graph, stage by stage.

Every stage records whether it passed and a few facts worth reading.  Later
stages are skipped once hypotheses fail, since there is no plan to inspect.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .graph import HypothesisReport, LabeledGraph, Sphere, Surface, Surgery, height_to_json, \
    label_sort_key, local_extrema, validate_hypotheses
from .handles import boundary_invariants, euler_characteristic, target_matches
from .morse import INTERNAL, MorsePlan, assemble, euler_char_of_plan, reeb_of_plan
from .oracles import spanning_count
from .reeb import compute_reeb, reeb_isomorphic
from .surface import realize_surface, surface_invariants
from .zalgebra import AbelianInvariants, IntMatrix, cokernel_invariants

SCHEMA_VERSION = 1


@dataclass
class Stage:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        out = {"stage": self.name, "passed": self.passed, "details": self.details}
        if timings:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class VerificationReport:
    dimension: int
    stages: list[Stage] = field(default_factory=list)
    hypotheses: Optional[HypothesisReport] = None
    plan: Optional[MorsePlan] = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages)

    @property
    def feasible(self) -> bool:
        return self.hypotheses is not None and self.hypotheses.feasible

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self, timings: bool = False) -> dict:
        return {"schema_version": SCHEMA_VERSION, "dimension": self.dimension,
                "verdict": "pass" if self.passed else "fail",
                "stages": [s.to_json(timings) for s in self.stages]}


def label_chi(label, m: int) -> int:
    """Euler characteristic of the closed (m-1)-manifold a label names."""
    if isinstance(label, Surface):
        return 2 - 2 * label.genus if label.orientable else 2 - label.crosscaps
    if isinstance(label, Surgery):
        return 0
    return 1 + (-1) ** (m - 1)


def label_h1(label) -> Optional[AbelianInvariants]:
    if isinstance(label, Surgery):
        return cokernel_invariants(IntMatrix.from_rows(label.matrix, label.size))
    if isinstance(label, Sphere):
        return AbelianInvariants(0)
    return None


def euler_from_pieces(plan: MorsePlan) -> int:
    """chi(M) from blocks and tubes glued along the level manifolds.

    A cap is a disk.  An internal block is E1 and E2, each a handlebody with an
    open ball removed, glued along the sphere they share.  Tubes are products
    X x I, and each tube meets two blocks along a copy of X.
    """
    m = plan.dimension
    sphere = 1 + (-1) ** (m - 1)
    total = 0
    for b in plan.blocks:
        if b.kind == INTERNAL:
            total += (euler_characteristic(b.upper_plan) + euler_characteristic(b.lower_plan)
                      - 2 + sphere)
        else:
            total += 1
    for t in plan.tubes:
        total -= label_chi(t.label, m)
    return total


def _timed(report: VerificationReport, name: str, fn) -> Stage:
    start = time.perf_counter()
    passed, details = fn()
    stage = Stage(name, bool(passed), details, time.perf_counter() - start)
    report.stages.append(stage)
    return stage


def _labels_agree(graph: LabeledGraph, rebuilt: LabeledGraph, mapping: dict) -> bool:
    def table(g, rename):
        out = Counter()
        for e in g.edges:
            a, b = (rename(x) for x in e.ends)
            out[(frozenset((a, b)), label_sort_key(e.label))] += 1
        return out
    return table(rebuilt, lambda v: mapping[v]) == table(graph, lambda v: v)


def verify_graph(graph: LabeledGraph, full: bool = False) -> VerificationReport:
    """Run every stage that applies to the graph's dimension."""
    m = graph.dimension
    report = VerificationReport(m)

    def hyp():
        report.hypotheses = validate_hypotheses(graph)
        return report.hypotheses.feasible, report.hypotheses.to_json()

    if not _timed(report, "hypotheses", hyp).passed:
        return report

    def plan_stage():
        plan = assemble(graph)
        report.plan = plan
        return True, {"morse_counts": list(plan.counts),
                      "critical_values": [height_to_json(x) for x in plan.critical_values],
                      "orientable": plan.orientable}

    _timed(report, "plan", plan_stage)
    plan = report.plan

    def reeb_stage():
        rebuilt = reeb_of_plan(plan)
        mapping = reeb_isomorphic(rebuilt, graph)
        ok = mapping is not None and _labels_agree(graph, rebuilt, mapping)
        return ok, {"isomorphic": mapping is not None, "labels_agree": ok}

    _timed(report, "plan_reeb", reeb_stage)

    def euler_stage():
        check = euler_char_of_plan(plan)
        pieces = euler_from_pieces(plan)
        details = {"euler_characteristic": check.value, "from_pieces": pieces}
        ok = pieces == check.value
        if m % 2:
            details["odd_dimension_zero"] = check.odd_dimension_ok
            ok = ok and check.ok
        return ok, details

    _timed(report, "euler", euler_stage)

    def counts_stage():
        extrema = local_extrema(graph)
        below = {v for v in extrema if all(graph.height(w) > graph.height(v)
                                           for w in graph.neighbors(v))}
        n_min, n_max = len(below), len(extrema) - len(below)
        ok = plan.counts[0] == n_min and plan.counts[m] == n_max
        return ok, {"minima": n_min, "maxima": n_max, "c0": plan.counts[0], "cm": plan.counts[m]}

    _timed(report, "extrema_counts", counts_stage)

    def slice_stage():
        bad = []
        for s in plan.slices:
            t = (s.low + s.high) / 2
            expected = sorted((label_sort_key(e.label) for e in graph.edges
                               if min(graph.height(v) for v in e.ends) < t
                               < max(graph.height(v) for v in e.ends)))
            if sorted(label_sort_key(x) for x in s.labels) != expected:
                bad.append(height_to_json(t))
        return not bad, {"slices": len(plan.slices), "mismatched_levels": bad}

    _timed(report, "slices", slice_stage)

    def block_stage():
        bad = []
        for b in plan.blocks:
            if b.kind != INTERNAL:
                continue
            for side, plan_, labels in (("up", b.upper_plan, b.up_labels),
                                        ("down", b.lower_plan, b.down_labels)):
                comps = boundary_invariants(plan_).components
                if len(comps) != len(labels) or not all(
                        target_matches(c, lab, m) for c, lab in zip(comps, labels)):
                    bad.append(f"{b.vertex}:{side}")
            if b.value != graph.height(b.vertex):
                bad.append(f"{b.vertex}:value")
        return not bad, {"blocks": len(plan.blocks), "mismatched": bad}

    _timed(report, "block_boundaries", block_stage)

    if m == 4:
        def homology_stage():
            slices = []
            for s in plan.slices:
                slices.append({"interval": [height_to_json(s.low), height_to_json(s.high)],
                               "edges": list(s.edges),
                               "h1": [label_h1(x).to_json() for x in s.labels]})
            return plan.orientable == "yes", {"orientable": plan.orientable, "slices": slices}

        _timed(report, "homology", homology_stage)

    if m == 2:
        def surface_stage():
            mesh = realize_surface(plan)
            inv = surface_invariants(mesh)
            reeb = compute_reeb(mesh)
            mapping = reeb_isomorphic(reeb, graph)
            circles = all(c.circle and c.chi == 0 for a in reeb.arcs for c in a.census)
            per_level = Counter(c.level for a in reeb.arcs for c in a.census)
            counts_ok = all(n == spanning_count(graph, t) for t, n in per_level.items())
            cycle_rank = len(graph.edges) - len(graph.vertices) + 1
            ok = (mapping is not None and circles and counts_ok and inv.orientable
                  and inv.chi == euler_char_of_plan(plan).value and inv.genus >= cycle_rank)
            details = {"vertices": mesh.n_vertices, "triangles": len(mesh.triangles),
                       "chi": inv.chi, "orientable": inv.orientable, "genus": inv.genus,
                       "cycle_rank": cycle_rank, "reeb_nodes": len(reeb.nodes),
                       "reeb_arcs": len(reeb.arcs), "isomorphic": mapping is not None,
                       "level_components_circles": circles, "level_counts_match": counts_ok}
            if full:
                details["mesh"] = mesh.to_json()
            return ok, details

        _timed(report, "surface_round_trip", surface_stage)
    return report
