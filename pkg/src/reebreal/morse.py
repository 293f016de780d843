"""Assemble a Morse function plan from a labeled graph.

Every vertex becomes a block with a single singular value g(v):

* a local minimum or maximum is a cap, the height function +-|x|^2 + g(v) on a
  disk, with one critical point of index 0 or m;
* any other vertex glues two pieces E1 and E2 built from most fundamental
  handlebodies, E1 realizing the upper boundary labels and E2 the lower ones.
  E2 is read upside down, so a k-handle there is a critical point of index m-k.

Every edge becomes a product tube carrying its label.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union

from .graph import Edge, HypothesisReport, LabeledGraph, PreimageLabel, Surface, Surgery, \
    height_to_json, is_sphere_like, label_problems, label_sort_key, label_str, label_to_json, \
    local_extrema, validate_hypotheses
from .handles import HandlebodyPlan, attach_plan_for_boundary


class HypothesisError(ValueError):
    """A block was requested for a vertex that does not satisfy its preconditions."""


class InvariantError(AssertionError):
    """An internal consistency check failed; this is a bug."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"[{invariant}] {message}")
        self.invariant = invariant


MIN, MAX, INTERNAL = "min", "max", "internal"


@dataclass(frozen=True)
class VertexBlock:
    vertex: str
    kind: str
    value: Fraction
    indices: tuple[int, ...]
    down_labels: tuple[PreimageLabel, ...] = ()
    up_labels: tuple[PreimageLabel, ...] = ()
    upper_plan: Optional[HandlebodyPlan] = None   # E1: from the removed sphere up to X1
    lower_plan: Optional[HandlebodyPlan] = None   # E2: read downward, X2 up to its sphere
    interval: Optional[tuple[Fraction, Fraction]] = None
    singular_level_connected: bool = True

    def to_json(self) -> dict:
        out = {"vertex": self.vertex, "kind": self.kind, "value": height_to_json(self.value),
               "indices": list(self.indices)}
        if self.interval is not None:
            out["interval"] = [height_to_json(x) for x in self.interval]
        if self.kind == INTERNAL:
            out["down_labels"] = [label_to_json(x) for x in self.down_labels]
            out["up_labels"] = [label_to_json(x) for x in self.up_labels]
            out["upper_plan"] = self.upper_plan.to_json()
            out["lower_plan"] = self.lower_plan.to_json()
            out["singular_level_connected"] = self.singular_level_connected
        return out


@dataclass(frozen=True)
class EdgeTube:
    edge: str
    label: PreimageLabel
    lower: str
    upper: str
    interval: tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        return {"edge": self.edge, "label": label_to_json(self.label), "lower": self.lower,
                "upper": self.upper, "interval": [height_to_json(x) for x in self.interval]}


@dataclass(frozen=True)
class Slice:
    low: Fraction
    high: Fraction
    labels: tuple[PreimageLabel, ...]
    edges: tuple[str, ...]

    def to_json(self) -> dict:
        return {"interval": [height_to_json(self.low), height_to_json(self.high)],
                "edges": list(self.edges), "labels": [label_to_json(x) for x in self.labels]}


@dataclass(frozen=True)
class MorsePlan:
    dimension: int
    blocks: tuple[VertexBlock, ...]
    tubes: tuple[EdgeTube, ...]
    critical_values: tuple[Fraction, ...]
    counts: tuple[int, ...]
    slices: tuple[Slice, ...]
    orientable: str  # "yes" or "unknown"

    def block(self, vertex: str) -> VertexBlock:
        for b in self.blocks:
            if b.vertex == vertex:
                return b
        raise KeyError(vertex)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "critical_values": [height_to_json(x) for x in self.critical_values],
            "morse_counts": list(self.counts),
            "euler_characteristic": euler_char_of_plan(self).value,
            "orientable": self.orientable,
            "blocks": [b.to_json() for b in self.blocks],
            "tubes": [t.to_json() for t in self.tubes],
            "slices": [s.to_json() for s in self.slices],
        }


# ---------------------------------------------------------------------------
# blocks

def build_extremum_block(graph: LabeledGraph, vertex: str) -> VertexBlock:
    nbrs = graph.neighbors(vertex)
    if len(nbrs) != 1:
        raise HypothesisError(f"vertex {vertex} has degree {len(nbrs)}; a cap needs degree 1")
    (edge,) = graph.incident()[vertex]
    if not is_sphere_like(edge.label):
        raise HypothesisError(f"cap at {vertex} needs a sphere label, edge {edge.id} "
                              f"carries {label_str(edge.label)}")
    h = graph.height(vertex)
    m = graph.dimension
    if graph.height(nbrs[0]) > h:
        return VertexBlock(vertex, MIN, h, (0,))
    return VertexBlock(vertex, MAX, h, (m,))


def block_indices(m: int, upper_plan: HandlebodyPlan, lower_plan: HandlebodyPlan) -> tuple[int, ...]:
    return tuple(sorted(upper_plan.indices() + [m - k for k in lower_plan.indices()]))


def build_internal_block(vertex: str, value, down_labels, up_labels, m: int) -> VertexBlock:
    down_labels, up_labels = tuple(down_labels), tuple(up_labels)
    if not down_labels or not up_labels:
        raise HypothesisError(f"vertex {vertex} has an empty side; it would be an extremum")
    for lab in down_labels + up_labels:
        problems = label_problems(lab, m)
        if problems:
            raise HypothesisError(f"vertex {vertex}: {problems[0][1]}")
    upper = attach_plan_for_boundary(m, up_labels)
    lower = attach_plan_for_boundary(m, down_labels)
    return VertexBlock(vertex, INTERNAL, Fraction(value), block_indices(m, upper, lower),
                       down_labels, up_labels, upper, lower)


# ---------------------------------------------------------------------------

def _side_edges(graph: LabeledGraph, v: str) -> tuple[list[Edge], list[Edge]]:
    h = graph.height(v)
    down, up = [], []
    for e in graph.incident()[v]:
        other = e.ends[1] if e.ends[0] == v else e.ends[0]
        (down if graph.height(other) < h else up).append(e)
    return down, up


def _orientability(graph: LabeledGraph) -> str:
    m = graph.dimension
    labels = [e.label for e in graph.edges]
    if m == 4 and all(is_sphere_like(x) or isinstance(x, Surgery) for x in labels):
        return "yes"
    if m == 3 and all(is_sphere_like(x) or (isinstance(x, Surface) and x.orientable)
                      for x in labels):
        return "yes"
    return "unknown"


def slice_table(graph: LabeledGraph, values) -> tuple[Slice, ...]:
    out = []
    for lo, hi in zip(values, values[1:]):
        crossing = []
        for e in graph.edges:
            a, b = sorted(graph.height(x) for x in e.ends)
            if a <= lo and b >= hi:
                crossing.append(e)
        crossing.sort(key=lambda e: (label_sort_key(e.label), e.id))
        out.append(Slice(lo, hi, tuple(e.label for e in crossing), tuple(e.id for e in crossing)))
    return tuple(out)


def assemble(graph: LabeledGraph) -> Union[MorsePlan, HypothesisReport]:
    """Build the plan, or return the failed hypothesis report."""
    report = validate_hypotheses(graph)
    if not report.feasible:
        return report
    m = graph.dimension
    extrema = local_extrema(graph)
    blocks = []
    for v in graph.vertices:
        h = graph.height(v)
        if v in extrema:
            block = build_extremum_block(graph, v)
        else:
            down, up = _side_edges(graph, v)
            block = build_internal_block(v, h, [e.label for e in down], [e.label for e in up], m)
        gap = min(abs(graph.height(w) - h) for w in graph.neighbors(v))
        r = gap / 3
        blocks.append(replace(block, interval=(h - r, h + r)))
    by_vertex = {b.vertex: b for b in blocks}

    tubes = []
    for e in graph.edges:
        a, b = e.ends
        lower, upper = (a, b) if graph.height(a) < graph.height(b) else (b, a)
        tubes.append(EdgeTube(e.id, e.label, lower, upper,
                              (by_vertex[lower].interval[1], by_vertex[upper].interval[0])))

    values = tuple(sorted({b.value for b in blocks}))
    counts = [0] * (m + 1)
    for b in blocks:
        for k in b.indices:
            counts[k] += 1
    plan = MorsePlan(m, tuple(blocks), tuple(tubes), values, tuple(counts),
                     slice_table(graph, values), _orientability(graph))
    _check_plan(graph, plan)
    return plan


def _check_plan(graph: LabeledGraph, plan: MorsePlan) -> None:
    m = plan.dimension
    for b in plan.blocks:
        lo, hi = b.interval
        if not lo < b.value < hi:
            raise InvariantError("block.interval", f"block {b.vertex} interval misses its value")
        if b.kind == MIN and b.indices != (0,) or b.kind == MAX and b.indices != (m,):
            raise InvariantError("block.cap", f"cap {b.vertex} has indices {b.indices}")
        if b.kind == INTERNAL and (not b.indices or not all(1 <= k <= m - 1 for k in b.indices)):
            raise InvariantError("block.internal", f"block {b.vertex} has indices {b.indices}")
    for t in plan.tubes:
        lo, hi = t.interval
        if not graph.height(t.lower) < lo < hi < graph.height(t.upper):
            raise InvariantError("tube.interval", f"tube {t.edge} interval {lo}..{hi}")
        if t.label != graph.edge(t.edge).label:
            raise InvariantError("tube.label", f"tube {t.edge} lost its label")
        for end, side in ((t.lower, "up_labels"), (t.upper, "down_labels")):
            blk = plan.block(end)
            if blk.kind == INTERNAL and t.label not in getattr(blk, side):
                raise InvariantError("tube.slot", f"tube {t.edge} has no matching slot at {end}")
    kinds = Counter(b.kind for b in plan.blocks)
    if plan.counts[0] != kinds[MIN] or plan.counts[m] != kinds[MAX]:
        raise InvariantError("counts.extrema", f"counts {plan.counts} vs caps {dict(kinds)}")
    rebuilt = reeb_of_plan(plan)
    if rebuilt.vertices != graph.vertices or \
            [(e.id, set(e.ends), e.label) for e in rebuilt.edges] != \
            [(e.id, set(e.ends), e.label) for e in graph.edges] or \
            any(rebuilt.height(v) != graph.height(v) for v in graph.vertices):
        raise InvariantError("plan.reeb", "block/tube adjacency differs from the input graph")


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EulerCheck:
    value: int
    odd_dimension_ok: Optional[bool]  # None when m is even

    @property
    def ok(self) -> bool:
        return self.odd_dimension_ok is not False


def euler_char_of_plan(plan: MorsePlan) -> EulerCheck:
    chi = sum((-1) ** k * c for k, c in enumerate(plan.counts))
    if plan.dimension % 2:
        return EulerCheck(chi, chi == 0)
    return EulerCheck(chi, None)


def reeb_of_plan(plan: MorsePlan) -> LabeledGraph:
    """Blocks as vertices (at their singular values), tubes as edges."""
    return LabeledGraph.build(
        plan.dimension,
        [(b.vertex, b.value) for b in plan.blocks],
        [(t.edge, t.lower, t.upper, t.label) for t in plan.tubes],
    )


def plan_reeb_dot(plan: MorsePlan) -> str:
    lines = ["graph reeb {"]
    for b in plan.blocks:
        lines.append(f'  "{b.vertex}" [height="{height_to_json(b.value)}", kind="{b.kind}"];')
    for t in plan.tubes:
        lines.append(f'  "{t.lower}" -- "{t.upper}" [id="{t.edge}", label="{label_str(t.label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
