"""Reeb graphs of PL height functions on triangulated surfaces.

The hot loop (level-set union-find over every distinct height) lives in a
compiled extension when one is available and falls back to pure Python
otherwise.  Set ``REEBREAL_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import json
import os
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import _sweep_py
from .graph import LabeledGraph, height_to_json, label_str
from .surface import TriangulatedSurface, check_manifold

try:
    if os.environ.get("REEBREAL_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _sweep as _sweep_c
except ImportError:
    _sweep_c = None

BACKEND = "cython" if _sweep_c is not None else "python"


def sweep_backend(name: Optional[str] = None):
    """Return the ``level_sweep`` function for a backend ("cython", "python" or default)."""
    if name is None:
        name = BACKEND
    if name == "python":
        return _sweep_py.level_sweep
    if name == "cython":
        if _sweep_c is None:
            raise ImportError("compiled sweep extension is not built")
        return _sweep_c.level_sweep
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class ReebNode:
    id: int
    height: Fraction
    plateau: bool = False


@dataclass(frozen=True)
class CensusEntry:
    level: Fraction   # a regular level inside the arc
    chi: int          # Euler characteristic of the level-set component there
    circle: bool


@dataclass(frozen=True)
class ReebArc:
    id: int
    lower: int
    upper: int
    census: tuple[CensusEntry, ...] = ()


@dataclass(frozen=True)
class ReebGraph:
    nodes: tuple[ReebNode, ...]
    arcs: tuple[ReebArc, ...]

    def node(self, nid: int) -> ReebNode:
        return self.nodes[nid]

    def to_labeled(self, dimension: int = 2) -> LabeledGraph:
        return LabeledGraph.build(
            dimension,
            [(f"n{n.id}", n.height) for n in self.nodes],
            [(f"a{a.id}", f"n{a.lower}", f"n{a.upper}") for a in self.arcs],
        )

    def to_json(self, dimension: int = 2) -> dict:
        return self.to_labeled(dimension).to_json()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def prepare_arrays(mesh: TriangulatedSurface):
    """Level indices, triangle/edge incidence and edge list as int64 arrays."""
    heights = np.asarray(mesh.heights, dtype=np.int64)
    levels, vlevel = np.unique(heights, return_inverse=True)
    tri = np.asarray(mesh.triangles, dtype=np.int64).reshape(-1, 3)
    pairs = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [0, 2]]])
    pairs.sort(axis=1)
    edge, inverse = np.unique(pairs, axis=0, return_inverse=True)
    tri_edge = inverse.reshape(3, -1).T.copy()
    return (levels, vlevel.astype(np.int64), np.ascontiguousarray(tri),
            np.ascontiguousarray(tri_edge.astype(np.int64)), np.ascontiguousarray(edge))


def compute_reeb(mesh: TriangulatedSurface, backend: Optional[str] = None,
                 check: bool = True) -> ReebGraph:
    """Extract the Reeb graph by a plateau-aware sweep over the distinct heights.

    A level-set component becomes a node when it contains a horizontal edge
    (a plateau) or when it does not continue as exactly one component below
    and one above.  Chains of the remaining components are merged into arcs.
    """
    if check:
        check_manifold(mesh)
    levels, vlevel, tri, tri_edge, edge = prepare_arrays(mesh)
    K = len(levels)
    ncomp, plateau, slabs = sweep_backend(backend)(vlevel, tri, tri_edge, edge, K)
    ncomp = [int(x) for x in ncomp]
    plateau = [int(x) for x in plateau]
    offset = [0] * (K + 1)
    for k in range(K):
        offset[k + 1] = offset[k] + ncomp[k]

    down = Counter()
    up_rows = defaultdict(list)
    rows = [tuple(int(x) for x in r) for r in slabs]
    for r in rows:
        k, lo, hi = r[0], r[1], r[2]
        up_rows[offset[k] + lo].append(r)
        down[offset[k + 1] + hi] += 1

    def kept(g: int) -> bool:
        return bool(plateau[g]) or down[g] != 1 or len(up_rows[g]) != 1

    scale = mesh.scale
    node_of = {}
    nodes = []
    for k in range(K):
        for c in range(ncomp[k]):
            g = offset[k] + c
            if kept(g):
                node_of[g] = len(nodes)
                nodes.append(ReebNode(len(nodes), Fraction(int(levels[k]), scale),
                                      bool(plateau[g])))
    arcs = []
    for k in range(K):
        for c in range(ncomp[k]):
            g = offset[k] + c
            if g not in node_of:
                continue
            for r in up_rows[g]:
                census = []
                while True:
                    kk, _, hi, nel, ntri, deg2 = r
                    mid = Fraction(int(levels[kk]) + int(levels[kk + 1]), 2 * scale)
                    chi = nel - ntri
                    census.append(CensusEntry(mid, chi, bool(deg2) and chi == 0))
                    top = offset[kk + 1] + hi
                    if top in node_of:
                        break
                    (r,) = up_rows[top]
                arcs.append(ReebArc(len(arcs), node_of[g], node_of[top], tuple(census)))
    return ReebGraph(tuple(nodes), tuple(arcs))


# ---------------------------------------------------------------------------
# isomorphism

GraphLike = Union[ReebGraph, LabeledGraph]


def _normalize(g: GraphLike):
    if isinstance(g, ReebGraph):
        verts = [n.id for n in g.nodes]
        heights = {n.id: n.height for n in g.nodes}
        edges = [(a.lower, a.upper) for a in g.arcs]
    else:
        verts = list(g.vertices)
        heights = {v: g.height(v) for v in verts}
        edges = [e.ends for e in g.edges]
    mult = Counter()
    for a, b in edges:
        mult[frozenset((a, b))] += 1
    return verts, heights, mult


def reeb_isomorphic(found: GraphLike, expected: GraphLike) -> Optional[dict]:
    """Height-preserving multigraph isomorphism from ``found`` onto ``expected``, or None."""
    fv, fh, fm = _normalize(found)
    ev, eh, em = _normalize(expected)
    if len(fv) != len(ev) or sum(fm.values()) != sum(em.values()):
        return None
    if any(len(k) == 1 for k in fm) or any(len(k) == 1 for k in em):
        return None

    def profile(verts, heights, mult):
        nb = defaultdict(Counter)
        for key, c in mult.items():
            a, b = tuple(key)
            nb[a][b] += c
            nb[b][a] += c
        prof = {}
        for v in verts:
            below = sum(c for w, c in nb[v].items() if heights[w] < heights[v])
            above = sum(c for w, c in nb[v].items() if heights[w] > heights[v])
            flat = sum(c for w, c in nb[v].items() if heights[w] == heights[v])
            prof[v] = (heights[v], below, above, flat, tuple(sorted(nb[v].values())))
        return nb, prof

    fnb, fprof = profile(fv, fh, fm)
    enb, eprof = profile(ev, eh, em)
    if sorted(fprof.values()) != sorted(eprof.values()):
        return None
    candidates = defaultdict(list)
    for v in ev:
        candidates[eprof[v]].append(v)

    # most constrained first, neighbors of placed vertices early
    order = []
    remaining = set(fv)
    while remaining:
        pick = min(remaining, key=lambda v: (
            -sum(1 for w in fnb[v] if w in order),
            len(candidates[fprof[v]]), str(v)))
        order.append(pick)
        remaining.discard(pick)

    mapping: dict = {}
    inverse: dict = {}

    def consistent(v, w) -> bool:
        for x, c in fnb[v].items():
            if x in mapping and enb[w].get(mapping[x], 0) != c:
                return False
        for z, c in enb[w].items():
            if z in inverse and fnb[v].get(inverse[z], 0) != c:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[fprof[v]]:
            if w in inverse or not consistent(v, w):
                continue
            mapping[v] = w
            inverse[w] = v
            if search(i + 1):
                return True
            del mapping[v]
            del inverse[w]
        return False

    return dict(mapping) if search(0) else None


# ---------------------------------------------------------------------------

def reeb_dot(graph: ReebGraph) -> str:
    lines = ["graph reeb {"]
    for n in graph.nodes:
        lines.append(f'  n{n.id} [height="{height_to_json(n.height)}"];')
    for a in graph.arcs:
        lines.append(f'  n{a.lower} -- n{a.upper} [label="S"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_dot(graph: LabeledGraph) -> str:
    lines = ["graph reeb {"]
    for v in graph.vertices:
        h = graph.heights.get(v)
        attr = f' [height="{height_to_json(h)}"]' if h is not None else ""
        lines.append(f'  "{v}"{attr};')
    for e in graph.edges:
        a, b = e.ends
        lines.append(f'  "{a}" -- "{b}" [id="{e.id}", label="{label_str(e.label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
