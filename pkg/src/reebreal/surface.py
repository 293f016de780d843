"""Triangulated closed surfaces with integer vertex heights, and the m = 2 realization.

``realize_surface`` turns a two-dimensional :class:`~reebreal.morse.MorsePlan`
into an explicit mesh:

* an internal block is a plateau: a connected graph drawn on the surface, all
  of whose vertices sit at the block's singular value.  Its ribbon faces are
  the boundary circles of the block, one per incident edge;
* a cap is a single apex vertex;
* a tube is a zigzag circle at two heights just above its lower end, joined to
  the faces (or apexes) at both ends by triangulated bands.

Heights are scaled by ``scale`` so that everything is an integer; a mesh
height ``h`` stands for ``h / scale``.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .graph import StructuralError
from .morse import INTERNAL, MorsePlan


class NonManifoldError(StructuralError):
    def __init__(self, message: str, edges=(), vertices=()):
        super().__init__(message)
        self.edges = tuple(edges)
        self.vertices = tuple(vertices)


@dataclass(frozen=True)
class TriangulatedSurface:
    heights: tuple[int, ...]
    triangles: tuple[tuple[int, int, int], ...]
    scale: int = 1

    @property
    def n_vertices(self) -> int:
        return len(self.heights)

    def edges(self) -> list[tuple[int, int]]:
        seen = set()
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (a, c)):
                seen.add((u, v) if u < v else (v, u))
        return sorted(seen)

    def to_json(self) -> dict:
        out = {"vertices": [{"id": i, "height": h} for i, h in enumerate(self.heights)],
               "triangles": [list(t) for t in self.triangles]}
        if self.scale != 1:
            out["scale"] = self.scale
        return out

    @classmethod
    def from_json(cls, obj) -> "TriangulatedSurface":
        try:
            raw = list(obj["vertices"])
            ids = {}
            heights = []
            for item in raw:
                vid = int(item["id"])
                if vid in ids:
                    raise StructuralError(f"duplicate mesh vertex {vid}")
                ids[vid] = len(heights)
                h = item["height"]
                if isinstance(h, bool) or not isinstance(h, int):
                    raise StructuralError(f"mesh heights must be integers, got {h!r}")
                heights.append(h)
            tris = []
            for t in obj["triangles"]:
                if len(t) != 3:
                    raise StructuralError(f"triangle {t!r} does not have three corners")
                tris.append(tuple(ids[int(x)] for x in t))
            scale = int(obj.get("scale", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad mesh document: {exc}") from None
        if scale < 1:
            raise StructuralError("scale must be positive")
        return cls(tuple(heights), tuple(tris), scale)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceInvariants:
    chi: int
    orientable: bool
    genus: int  # orientable genus, or crosscap count when non-orientable


def _edge_triangles(mesh: TriangulatedSurface) -> dict[tuple[int, int], list[int]]:
    out = defaultdict(list)
    for t, (a, b, c) in enumerate(mesh.triangles):
        for u, v in ((a, b), (b, c), (a, c)):
            out[(u, v) if u < v else (v, u)].append(t)
    return out


def check_manifold(mesh: TriangulatedSurface) -> dict[tuple[int, int], list[int]]:
    """Raise NonManifoldError unless the mesh is a connected closed surface."""
    n = mesh.n_vertices
    for t in mesh.triangles:
        if len(set(t)) != 3 or not all(0 <= x < n for x in t):
            raise NonManifoldError(f"degenerate triangle {t}")
    if len({tuple(sorted(t)) for t in mesh.triangles}) != len(mesh.triangles):
        raise NonManifoldError("repeated triangle")
    et = _edge_triangles(mesh)
    bad = [e for e, ts in et.items() if len(ts) != 2]
    if bad:
        raise NonManifoldError(f"{len(bad)} edge(s) not in exactly two triangles", edges=bad)
    link = defaultdict(list)
    for a, b, c in mesh.triangles:
        link[a].append((b, c))
        link[b].append((a, c))
        link[c].append((a, b))
    bad_v = []
    for v in range(n):
        pairs = link.get(v)
        if not pairs:
            bad_v.append(v)
            continue
        adj = defaultdict(list)
        for x, y in pairs:
            adj[x].append(y)
            adj[y].append(x)
        if any(len(ys) != 2 for ys in adj.values()):
            bad_v.append(v)
            continue
        start = next(iter(adj))
        seen, prev, cur = {start}, None, start
        while True:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                break
            seen.add(nxt)
            prev, cur = cur, nxt
        if len(seen) != len(adj):
            bad_v.append(v)
    if bad_v:
        raise NonManifoldError(f"{len(bad_v)} vertex link(s) are not a single cycle",
                               vertices=bad_v)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c in mesh.triangles:
        parent[find(a)] = find(b)
        parent[find(b)] = find(c)
    if len({find(v) for v in range(n)}) != 1:
        raise NonManifoldError("mesh is not connected")
    return et


def surface_invariants(mesh: TriangulatedSurface) -> SurfaceInvariants:
    et = check_manifold(mesh)
    chi = mesh.n_vertices - len(et) + len(mesh.triangles)
    # propagate an orientation across shared edges
    sign = [0] * len(mesh.triangles)
    orientable = True
    for root in range(len(mesh.triangles)):
        if sign[root]:
            continue
        sign[root] = 1
        stack = [root]
        while stack:
            t = stack.pop()
            a, b, c = mesh.triangles[t]
            if sign[t] < 0:
                a, b = b, a
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                for s in et[key]:
                    if s == t:
                        continue
                    x, y, z = mesh.triangles[s]
                    # s must traverse the shared edge as v -> u
                    forward = (x, y) == (v, u) or (y, z) == (v, u) or (z, x) == (v, u)
                    want = 1 if forward else -1
                    if sign[s] == 0:
                        sign[s] = want
                        stack.append(s)
                    elif sign[s] != want:
                        orientable = False
    genus = (2 - chi) // 2 if orientable else 2 - chi
    return SurfaceInvariants(chi, orientable, genus)


# ---------------------------------------------------------------------------
# ribbon graphs for plateau blocks

class _Ribbon:
    """A graph with a cyclic order of darts at each vertex.

    Dart ``2e`` runs along edge e from its first end, ``2e + 1`` back.
    """

    def __init__(self, cycle_length: int = 4):
        self.ends: list[tuple[int, int]] = []
        self.rot: list[list[int]] = [[] for _ in range(cycle_length)]
        for i in range(cycle_length):
            self._edge(i, (i + 1) % cycle_length)

    def _edge(self, a: int, b: int, before_a=None, before_b=None) -> None:
        e = len(self.ends)
        self.ends.append((a, b))
        for v, dart, before in ((a, 2 * e, before_a), (b, 2 * e + 1, before_b)):
            r = self.rot[v]
            r.insert(r.index(before) if before is not None else len(r), dart)

    def tail(self, d: int) -> int:
        a, b = self.ends[d >> 1]
        return a if d % 2 == 0 else b

    def faces(self) -> list[list[int]]:
        """Face boundaries as lists of outgoing darts."""
        pos = {}
        for v, r in enumerate(self.rot):
            for i, d in enumerate(r):
                pos[d] = (v, i)
        seen, out = set(), []
        for start in range(2 * len(self.ends)):
            if start in seen:
                continue
            face, d = [], start
            while d not in seen:
                seen.add(d)
                face.append(d)
                v, i = pos[d ^ 1]
                r = self.rot[v]
                d = r[(i + 1) % len(r)]
            out.append(face)
        return out

    def add_path(self, d1: int, d2: int) -> None:
        """Join the corners just before darts d1 and d2 by a path of three edges."""
        v1, v2 = self.tail(d1), self.tail(d2)
        z1, z2 = len(self.rot), len(self.rot) + 1
        self.rot.extend([[], []])
        self._edge(v1, z1, before_a=d1)
        self._edge(z1, z2)
        self._edge(z2, v2, before_b=d2)

    @property
    def n_vertices(self) -> int:
        return len(self.rot)


def plateau_ribbon(saddles: int, circles: int) -> tuple[_Ribbon, list[list[int]]]:
    """A connected ribbon graph with V - E = -saddles and exactly ``circles`` faces.

    Returns the graph and its faces as vertex walks.
    """
    merges, rem = divmod(saddles - circles + 2, 2)
    splits = saddles - merges
    if rem or merges < 0 or splits < 0:
        raise ValueError(f"no plateau with {saddles} saddles and {circles} boundary circles")
    rib = _Ribbon()
    while merges or splits:
        faces = rib.faces()
        if merges and len(faces) >= 2:
            rib.add_path(faces[0][0], faces[1][0])
            merges -= 1
        else:
            face = max(faces, key=len)
            rib.add_path(face[0], face[len(face) // 2])
            splits -= 1
    faces = rib.faces()
    if rib.n_vertices - len(rib.ends) != -saddles or len(faces) != circles:
        raise AssertionError("plateau construction went wrong")
    return rib, [[rib.tail(d) for d in f] for f in faces]


# ---------------------------------------------------------------------------

def _band(tris: list, walk: Sequence[int], circle: Sequence[int]) -> None:
    """Triangulate the annulus between a closed walk and a longer circle."""
    n, k = len(circle), len(walk)
    starts = [i * n // k for i in range(k)] + [n]
    for i in range(k):
        for j in range(starts[i], starts[i + 1]):
            tris.append((walk[i], circle[j], circle[(j + 1) % n]))
        tris.append((walk[(i + 1) % k], walk[i], circle[starts[i + 1] % n]))


def _cone(tris: list, apex: int, circle: Sequence[int]) -> None:
    n = len(circle)
    for j in range(n):
        tris.append((apex, circle[j], circle[(j + 1) % n]))


def height_scale(values) -> int:
    """Integer factor putting every value and two extra levels per gap on the integers."""
    den = 1
    for x in values:
        den = lcm(den, Fraction(x).denominator)
    return 3 * den


def realize_surface(plan: MorsePlan) -> TriangulatedSurface:
    if plan.dimension != 2:
        raise ValueError(f"realize_surface needs a plan with m=2, got m={plan.dimension}")
    scale = height_scale(plan.critical_values)
    heights: list[int] = []

    def new_vertex(h: int) -> int:
        heights.append(h)
        return len(heights) - 1

    level = {b.vertex: int(b.value * scale) for b in plan.blocks}
    # attachment walk for each (tube, end) pair
    walks: dict[tuple[str, str], list[int]] = {}
    apex: dict[str, int] = {}
    tris: list[tuple[int, int, int]] = []
    for b in plan.blocks:
        if b.kind != INTERNAL:
            apex[b.vertex] = new_vertex(level[b.vertex])
            continue
        down = [t.edge for t in plan.tubes if t.upper == b.vertex]
        up = [t.edge for t in plan.tubes if t.lower == b.vertex]
        rib, faces = plateau_ribbon(len(b.indices), len(down) + len(up))
        ids = [new_vertex(level[b.vertex]) for _ in range(rib.n_vertices)]
        for edge, face in zip(down + up, faces):
            walks[(edge, b.vertex)] = [ids[v] for v in face]
    for t in plan.tubes:
        lo = level[t.lower]
        ends = [walks.get((t.edge, t.lower)), walks.get((t.edge, t.upper))]
        n = max([4] + [len(w) for w in ends if w])
        n += n % 2
        circle = [new_vertex(lo + 1 + j % 2) for j in range(n)]
        # the upper end reads the circle backwards so every triangle keeps one orientation
        for end, walk, ring in zip((t.lower, t.upper), ends, (circle, circle[::-1])):
            if walk is None:
                _cone(tris, apex[end], ring)
            else:
                _band(tris, walk, ring)
    return TriangulatedSurface(tuple(heights), tuple(tris), scale)
