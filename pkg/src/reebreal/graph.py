"""Labeled graphs, preimage labels and the hypothesis checks run before construction.

A :class:`LabeledGraph` is a finite multigraph with a rational height on each
vertex and a preimage label on each edge.  The label says what a regular level
component over that edge should look like: a sphere, a closed surface (only for
``m = 3``) or a surgery-presented 3-manifold given by a linking matrix (only for
``m = 4``).
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union


class StructuralError(ValueError):
    """Input is malformed (as opposed to well-formed but infeasible)."""


# ---------------------------------------------------------------------------
# preimage labels

@dataclass(frozen=True)
class Sphere:
    kind = "sphere"


@dataclass(frozen=True)
class Surface:
    genus: int = 0
    orientable: bool = True
    crosscaps: int = 0
    kind = "surface"


@dataclass(frozen=True)
class Surgery:
    matrix: tuple[tuple[int, ...], ...] = ()
    kind = "surgery"

    @property
    def size(self) -> int:
        return len(self.matrix)


PreimageLabel = Union[Sphere, Surface, Surgery]


def surgery(rows: Iterable[Iterable[int]]) -> Surgery:
    return Surgery(tuple(tuple(int(x) for x in row) for row in rows))


def is_sphere_like(label: PreimageLabel) -> bool:
    """True for labels that name the standard sphere S^{m-1}."""
    if isinstance(label, Sphere):
        return True
    if isinstance(label, Surface):
        return label.orientable and label.genus == 0
    return label.size == 0


def label_problems(label: PreimageLabel, m: int) -> list[tuple[str, str]]:
    """Return (rule, message) pairs for every way ``label`` is illegal in dimension m."""
    out = []
    if isinstance(label, Sphere):
        return out
    if isinstance(label, Surface):
        if m != 3:
            out.append(("label.dimension", f"surface label needs m=3, got m={m}"))
        if label.genus < 0 or label.crosscaps < 0:
            out.append(("label.surface", "genus and crosscaps must be non-negative"))
        if label.orientable:
            if label.crosscaps:
                out.append(("label.surface", "orientable surface cannot carry crosscaps"))
        else:
            if label.crosscaps < 2 or label.crosscaps % 2:
                out.append(("label.crosscaps",
                            f"non-orientable surface needs an even crosscap count >= 2, "
                            f"got {label.crosscaps}"))
        return out
    if isinstance(label, Surgery):
        if m != 4:
            out.append(("label.dimension", f"surgery label needs m=4, got m={m}"))
        n = label.size
        if any(len(row) != n for row in label.matrix):
            out.append(("label.surgery", "linking matrix must be square"))
        elif any(label.matrix[i][j] != label.matrix[j][i]
                 for i in range(n) for j in range(i)):
            out.append(("label.surgery", "linking matrix must be symmetric"))
        return out
    raise StructuralError(f"unknown label {label!r}")


def label_sort_key(label: PreimageLabel) -> tuple:
    if isinstance(label, Sphere):
        return (0,)
    if isinstance(label, Surface):
        return (1, not label.orientable, label.genus, label.crosscaps)
    return (2, label.size, label.matrix)


def label_str(label: PreimageLabel) -> str:
    if isinstance(label, Sphere):
        return "S"
    if isinstance(label, Surface):
        if label.orientable:
            return f"T{label.genus}" if label.genus else "S"
        return f"N{label.crosscaps}"
    rows = ";".join(",".join(str(x) for x in row) for row in label.matrix)
    return f"L[{rows}]"


def label_to_json(label: PreimageLabel) -> dict:
    if isinstance(label, Sphere):
        return {"kind": "sphere"}
    if isinstance(label, Surface):
        return {"kind": "surface", "orientable": label.orientable,
                "genus": label.genus, "crosscaps": label.crosscaps}
    return {"kind": "surgery", "matrix": [list(row) for row in label.matrix]}


def label_from_json(obj: Mapping) -> PreimageLabel:
    if not isinstance(obj, Mapping) or "kind" not in obj:
        raise StructuralError(f"label must be an object with a 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "sphere":
            return Sphere()
        if kind == "surface":
            orientable = bool(obj.get("orientable", True))
            return Surface(genus=int(obj.get("genus", 0)), orientable=orientable,
                           crosscaps=int(obj.get("crosscaps", 0)))
        if kind == "surgery":
            return surgery(obj.get("matrix", []))
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"bad label {obj!r}: {exc}") from None
    raise StructuralError(f"unknown label kind {kind!r}")


# ---------------------------------------------------------------------------
# heights

def parse_height(value) -> Fraction:
    if isinstance(value, bool):
        raise StructuralError(f"bad height {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise StructuralError(f"bad height {value!r}") from None
    raise StructuralError(f"height must be an integer or a rational string, got {value!r}")


def _coerce_height(h) -> Optional[Fraction]:
    if h is None or isinstance(h, Fraction):
        return h
    return parse_height(h)


def height_to_json(h: Fraction):
    return h.numerator if h.denominator == 1 else f"{h.numerator}/{h.denominator}"


# ---------------------------------------------------------------------------
# graphs

@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    label: PreimageLabel = Sphere()


@dataclass(frozen=True)
class LabeledGraph:
    dimension: int
    vertices: tuple[str, ...]
    heights: Mapping[str, Optional[Fraction]]
    edges: tuple[Edge, ...]

    @classmethod
    def build(cls, dimension: int, vertices, edges) -> "LabeledGraph":
        """Convenience constructor.

        ``vertices`` is an iterable of ids or of ``(id, height)`` pairs;
        ``edges`` is an iterable of ``(id, u, v)`` or ``(id, u, v, label)``.
        """
        vids, heights = [], {}
        for item in vertices:
            if isinstance(item, tuple):
                vid, h = item
                heights[str(vid)] = _coerce_height(h)
            else:
                vid = item
                heights[str(vid)] = None
            vids.append(str(vid))
        es = []
        for item in edges:
            if len(item) == 3:
                eid, u, v = item
                label = Sphere()
            else:
                eid, u, v, label = item
            es.append(Edge(str(eid), (str(u), str(v)), label))
        return cls(dimension, tuple(vids), heights, tuple(es))

    def height(self, v: str) -> Fraction:
        h = self.heights.get(v)
        if h is None:
            raise StructuralError(f"vertex {v!r} has no height")
        return h

    @property
    def has_heights(self) -> bool:
        return all(self.heights.get(v) is not None for v in self.vertices)

    def with_heights(self, heights: Mapping[str, object]) -> "LabeledGraph":
        new = {v: _coerce_height(h) for v, h in heights.items()}
        return LabeledGraph(self.dimension, self.vertices, new, self.edges)

    def with_dimension(self, m: int) -> "LabeledGraph":
        return LabeledGraph(m, self.vertices, self.heights, self.edges)

    def incident(self) -> dict[str, list[Edge]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            for end in e.ends:
                if end in inc:
                    inc[end].append(e)
        return inc

    def degree(self, v: str) -> int:
        return sum((e.ends[0] == v) + (e.ends[1] == v) for e in self.edges)

    def neighbors(self, v: str) -> list[str]:
        """Neighbors of v, repeated once per connecting edge."""
        out = []
        for e in self.edges:
            a, b = e.ends
            if a == v:
                out.append(b)
            if b == v:
                out.append(a)
        return out

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def to_json(self) -> dict:
        verts = []
        for v in self.vertices:
            entry = {"id": v}
            h = self.heights.get(v)
            if h is not None:
                entry["height"] = height_to_json(h)
            verts.append(entry)
        return {
            "dimension": self.dimension,
            "vertices": verts,
            "edges": [{"id": e.id, "ends": list(e.ends), "label": label_to_json(e.label)}
                      for e in self.edges],
        }

    @classmethod
    def from_json(cls, obj: Mapping, dimension: Optional[int] = None) -> "LabeledGraph":
        if not isinstance(obj, Mapping):
            raise StructuralError("graph document must be a JSON object")
        m = dimension if dimension is not None else obj.get("dimension")
        if isinstance(m, bool) or not isinstance(m, int):
            raise StructuralError(f"dimension must be an integer, got {m!r}")
        try:
            raw_vertices = list(obj["vertices"])
            raw_edges = list(obj["edges"])
        except (KeyError, TypeError):
            raise StructuralError("graph needs 'vertices' and 'edges' lists") from None
        vids, heights = [], {}
        for item in raw_vertices:
            if not isinstance(item, Mapping) or "id" not in item:
                raise StructuralError(f"bad vertex entry {item!r}")
            vid = str(item["id"])
            if vid in heights:
                raise StructuralError(f"duplicate vertex id {vid!r}")
            vids.append(vid)
            heights[vid] = parse_height(item["height"]) if item.get("height") is not None else None
        edges = []
        seen = set()
        for item in raw_edges:
            if not isinstance(item, Mapping) or "id" not in item or "ends" not in item:
                raise StructuralError(f"bad edge entry {item!r}")
            ends = item["ends"]
            if not isinstance(ends, (list, tuple)) or len(ends) != 2:
                raise StructuralError(f"edge {item['id']!r} needs exactly two ends")
            eid = str(item["id"])
            if eid in seen:
                raise StructuralError(f"duplicate edge id {eid!r}")
            seen.add(eid)
            label = label_from_json(item.get("label", {"kind": "sphere"}))
            edges.append(Edge(eid, (str(ends[0]), str(ends[1])), label))
        return cls(m, tuple(vids), heights, tuple(edges))


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Violation:
    rule: str
    ids: tuple[str, ...]
    message: str

    @property
    def structural(self) -> bool:
        return self.rule.startswith("structure.")

    def to_json(self) -> dict:
        return {"rule": self.rule, "ids": list(self.ids), "message": self.message}


@dataclass(frozen=True)
class HypothesisReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def structural(self) -> bool:
        return any(v.structural for v in self.violations)

    def rules(self) -> list[str]:
        return [v.rule for v in self.violations]

    def to_json(self) -> dict:
        return {"feasible": self.feasible,
                "violations": [v.to_json() for v in self.violations]}


def _structure_violations(graph: LabeledGraph, need_heights: bool) -> list[Violation]:
    out = []
    if graph.dimension is None or graph.dimension < 2:
        out.append(Violation("structure.dimension", (), f"dimension must be > 1, got {graph.dimension}"))
    known = set(graph.vertices)
    if len(known) != len(graph.vertices):
        out.append(Violation("structure.duplicate_vertex", (), "duplicate vertex ids"))
    eids = [e.id for e in graph.edges]
    if len(set(eids)) != len(eids):
        out.append(Violation("structure.duplicate_edge", (), "duplicate edge ids"))
    for e in graph.edges:
        missing = [x for x in e.ends if x not in known]
        if missing:
            out.append(Violation("structure.dangling", (e.id, *missing),
                                 f"edge {e.id} references unknown vertex {missing[0]}"))
    if need_heights:
        for v in graph.vertices:
            if graph.heights.get(v) is None:
                out.append(Violation("structure.height_missing", (v,), f"vertex {v} has no height"))
    return out


def _components(graph: LabeledGraph) -> list[set[str]]:
    parent = {v: v for v in graph.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in graph.edges:
        a, b = find(e.ends[0]), find(e.ends[1])
        if a != b:
            parent[a] = b
    comps: dict[str, set[str]] = {}
    for v in graph.vertices:
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values())


def validate_good_function(graph: LabeledGraph) -> HypothesisReport:
    """Report loop edges and edges whose endpoints share a height.

    Raises :class:`StructuralError` on dangling endpoints or missing heights.
    """
    problems = _structure_violations(graph, need_heights=True)
    if problems:
        raise StructuralError(problems[0].message)
    out = []
    for e in graph.edges:
        a, b = e.ends
        if a == b:
            out.append(Violation("loop", (e.id,), f"edge {e.id} is a loop at {a}"))
        elif graph.height(a) == graph.height(b):
            out.append(Violation("good_function", (e.id,),
                                 f"edge {e.id} has equal endpoint heights {graph.height(a)}"))
    return HypothesisReport(tuple(out))


def local_extrema(graph: LabeledGraph) -> set[str]:
    out = set()
    for v in graph.vertices:
        nbrs = graph.neighbors(v)
        if not nbrs:
            continue
        h = graph.height(v)
        if all(graph.height(w) > h for w in nbrs) or all(graph.height(w) < h for w in nbrs):
            out.add(v)
    return out


def validate_hypotheses(graph: LabeledGraph) -> HypothesisReport:
    """Run every check needed before a Morse plan can be assembled.

    Structural problems stop the run early and carry ``structure.*`` rule ids.
    """
    structural = _structure_violations(graph, need_heights=True)
    if structural:
        return HypothesisReport(tuple(structural))
    m = graph.dimension
    out: list[Violation] = []
    if not graph.edges:
        out.append(Violation("nonempty", (), "graph has no edges"))
    comps = _components(graph)
    if len(comps) > 1:
        stray = sorted(min(comps, key=len))
        out.append(Violation("connected", tuple(stray), f"graph has {len(comps)} components"))
    report = validate_good_function(graph)
    out.extend(report.violations)
    if not report.violations:
        extrema = local_extrema(graph)
        inc = graph.incident()
        for v in graph.vertices:
            if v not in extrema:
                continue
            deg = graph.degree(v)
            if deg != 1:
                out.append(Violation("extremum_degree", (v,),
                                     f"extremum vertex {v} has degree {deg}"))
            for e in inc[v]:
                if not is_sphere_like(e.label):
                    out.append(Violation("extremum_label", (e.id, v),
                                         f"edge {e.id} at extremum {v} is labeled "
                                         f"{label_str(e.label)}, not a sphere"))
    for e in graph.edges:
        for rule, msg in label_problems(e.label, m):
            out.append(Violation(rule, (e.id,), f"edge {e.id}: {msg}"))
    return HypothesisReport(tuple(out))


# ---------------------------------------------------------------------------
# synthesis

@dataclass(frozen=True)
class Infeasible:
    reason: str

    def __bool__(self) -> bool:
        return False


def synthesize_good_function(graph: LabeledGraph) -> Union[dict[str, int], Infeasible]:
    """Find integer heights whose local extrema all sit at degree-1 vertices.

    Vertices are placed bottom-up.  A vertex of degree >= 2 may only be placed
    once it has a lower neighbor and while it still has an unplaced one; which
    placements remain possible depends only on the placed set, so failed sets
    are memoized.  Deterministic for a fixed vertex order.
    """
    problems = [v for v in _structure_violations(graph, need_heights=False)]
    if problems:
        raise StructuralError(problems[0].message)
    if not graph.edges:
        raise StructuralError("graph has no edges")
    if any(e.ends[0] == e.ends[1] for e in graph.edges):
        return Infeasible("graph has a loop edge; no good function exists")
    if len(_components(graph)) > 1:
        raise StructuralError("graph is not connected")

    index = {v: i for i, v in enumerate(graph.vertices)}
    n = len(index)
    degree = [0] * n
    nbr_mask = [0] * n
    for e in graph.edges:
        a, b = index[e.ends[0]], index[e.ends[1]]
        degree[a] += 1
        degree[b] += 1
        nbr_mask[a] |= 1 << b
        nbr_mask[b] |= 1 << a
    if not any(d == 1 for d in degree):
        return Infeasible("no vertex has degree 1, so the global minimum is an "
                          "extremum of degree >= 2")

    full = (1 << n) - 1
    dead: set[int] = set()
    order: list[int] = []

    def placeable(i: int, placed: int) -> bool:
        if degree[i] == 1:
            return True
        return bool(nbr_mask[i] & placed) and bool(nbr_mask[i] & ~placed & full)

    def search(placed: int) -> bool:
        if placed == full:
            return True
        if placed in dead:
            return False
        for i in range(n):
            if not placed >> i & 1 and placeable(i, placed):
                order.append(i)
                if search(placed | 1 << i):
                    return True
                order.pop()
        dead.add(placed)
        return False

    limit = sys.getrecursionlimit()
    if n + 50 > limit:
        sys.setrecursionlimit(n + 100)
    try:
        found = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return Infeasible("every vertex ordering leaves some vertex of degree >= 2 "
                          "without a lower or without a higher neighbor")
    return {graph.vertices[i]: rank for rank, i in enumerate(order)}
