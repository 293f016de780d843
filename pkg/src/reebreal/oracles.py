"""Independent reference computations and seeded generators for the test suites.

The oracles here deliberately avoid the production algorithms: feasibility is
decided by trying every vertex ordering, and Reeb graphs are read off by
grouping triangles at sample levels rather than by the element sweep.
"""
from __future__ import annotations

import random
from collections import defaultdict
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .graph import LabeledGraph, Sphere, Surface, Surgery, local_extrema, \
    synthesize_good_function
from .handles import Handle, HandlebodyPlan
from .reeb import ReebArc, ReebGraph, ReebNode
from .surface import TriangulatedSurface
from .zalgebra import IntMatrix


# ---------------------------------------------------------------------------
# good functions

def exhaustive_feasible(graph: LabeledGraph) -> bool:
    """Try every strict ordering of the vertices as heights.

    Ties between non-adjacent vertices never matter for the hypotheses, so
    strict orderings are enough.
    """
    if any(a == b for a, b in (e.ends for e in graph.edges)):
        return False
    verts = list(graph.vertices)
    for perm in permutations(range(len(verts))):
        trial = graph.with_heights(dict(zip(verts, perm)))
        if all(trial.degree(v) == 1 for v in local_extrema(trial)):
            return True
    return False


def random_multigraph(rng: random.Random, max_vertices: int = 6, max_edges: int = 9,
                      dimension: int = 2) -> LabeledGraph:
    """A connected loopless multigraph without heights."""
    n = rng.randint(2, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append((i, rng.randrange(i)))
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        a, b = rng.sample(range(n), 2)
        edges.append((a, b))
    rng.shuffle(edges)
    perm = list(range(n))
    rng.shuffle(perm)
    return LabeledGraph.build(
        dimension, verts,
        [(f"e{j}", verts[perm[a]], verts[perm[b]]) for j, (a, b) in enumerate(edges)])


# ---------------------------------------------------------------------------
# feasible labeled graphs

def _spread_heights(rng: random.Random, graph: LabeledGraph, ranks: dict) -> dict:
    """Turn ranks into varied exact heights, sometimes tying non-adjacent vertices."""
    order = sorted(ranks, key=ranks.get)
    adjacent = {frozenset(e.ends) for e in graph.edges}
    level = Fraction(rng.randint(-3, 3))
    heights = {}
    same: list = []
    for v in order:
        if same:
            tie = all(frozenset((v, u)) not in adjacent for u in same) and rng.random() < 0.15
            if not tie:
                level += Fraction(rng.randint(1, 4), rng.choice((1, 1, 2, 3)))
                same = []
        heights[v] = level
        same.append(v)
    return heights


def _random_label(rng: random.Random, m: int):
    if m == 3:
        r = rng.random()
        if r < 0.3:
            return Sphere()
        if r < 0.8:
            return Surface(genus=rng.randint(0, 5))
        return Surface(orientable=False, crosscaps=rng.choice((2, 4)))
    if m == 4:
        if rng.random() < 0.3:
            return Sphere()
        n = rng.randint(0, 3)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                rows[i][j] = rows[j][i] = rng.randint(-5, 5)
        return Surgery(tuple(tuple(r) for r in rows))
    return Sphere()


def random_feasible_graph(rng: random.Random, dimension: int = 2, max_vertices: int = 12,
                          max_edges: int = 16) -> LabeledGraph:
    """A random graph that satisfies every hypothesis, with random legal labels."""
    while True:
        shape = random_multigraph(rng, max_vertices, max_edges, dimension)
        ranks = synthesize_good_function(shape)
        if not ranks:
            continue
        g = shape.with_heights(_spread_heights(rng, shape, ranks))
        extrema = local_extrema(g)
        edges = []
        for e in g.edges:
            label = Sphere() if extrema & set(e.ends) else _random_label(rng, dimension)
            edges.append((e.id, e.ends[0], e.ends[1], label))
        return LabeledGraph.build(dimension, [(v, g.height(v)) for v in g.vertices], edges)


# ---------------------------------------------------------------------------
# handle plans and matrices

def random_plan(rng: random.Random, m: int, max_handles: int = 8) -> HandlebodyPlan:
    """A valid random most fundamental plan for the symbolic handle calculus."""
    live = [0]
    next_id = 1
    handles = []
    twohandles: dict[int, int] = {}
    for pos in range(rng.randint(1, max_handles)):
        k = rng.randint(1, m - 1)
        c = rng.choice(live)
        if k == 1 and len(live) > 1 and rng.random() < 0.4:
            other = rng.choice([x for x in live if x != c])
            live.remove(other)
            for p, comp in twohandles.items():
                if comp == other:
                    twohandles[p] = c
            handles.append(Handle(1, c, component_to=other))
            continue
        if k == 1:
            handles.append(Handle(1, c, orientation_preserving=rng.random() < 0.7))
            if m == 2 and handles[-1].orientation_preserving:
                live.append(next_id)
                next_id += 1
            continue
        if k == m - 1:
            handles.append(Handle(k, c))
            live.append(next_id)
            next_id += 1
            continue
        if m == 4 and k == 2:
            links = tuple((p, rng.randint(-3, 3)) for p, comp in twohandles.items()
                          if comp == c and rng.random() < 0.5)
            handles.append(Handle(2, c, framing=rng.randint(-5, 5), linking=links))
            twohandles[pos] = c
            continue
        handles.append(Handle(k, c))
    return HandlebodyPlan(m, tuple(handles))


def random_matrix(rng: random.Random, max_dim: int = 6, bound: int = 9) -> IntMatrix:
    r, c = rng.randint(0, max_dim), rng.randint(0, max_dim)
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)], c)


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> IntMatrix:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    if n and rng.random() < 0.5:
        rows[0] = [-a for a in rows[0]]
    return IntMatrix.from_rows(rows, n)


# ---------------------------------------------------------------------------
# brute-force Reeb graph

def _level_components(mesh: TriangulatedSurface, t: Fraction) -> list[set[int]]:
    """Triangles meeting the level ``t``, grouped by connectivity of the level set.

    Two triangles share a piece of the level set when they share a vertex at
    height t, or an edge whose open interior crosses t.
    """
    h = [Fraction(x) for x in mesh.heights]
    meet = [i for i, tri in enumerate(mesh.triangles)
            if min(h[v] for v in tri) <= t <= max(h[v] for v in tri)]
    owners = defaultdict(list)
    for i in meet:
        tri = mesh.triangles[i]
        for v in tri:
            if h[v] == t:
                owners[("v", v)].append(i)
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])):
            if min(h[a], h[b]) < t < max(h[a], h[b]):
                owners[("e", min(a, b), max(a, b))].append(i)
    parent = {i: i for i in meet}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in owners.values():
        for other in group[1:]:
            parent[find(other)] = find(group[0])
    comps = defaultdict(set)
    for i in meet:
        comps[find(i)].add(i)
    return sorted(comps.values(), key=min)


def brute_force_reeb(mesh: TriangulatedSurface, samples_per_gap: int = 3) -> ReebGraph:
    """Reeb graph from level-set components at every vertex height and between them.

    Components at consecutive sample levels are linked when they share a
    triangle.  A component at a vertex height is kept as a node when it holds
    a horizontal edge or does not continue as exactly one component on each
    side; the others are contracted into arcs.
    """
    h = [Fraction(x) for x in mesh.heights]
    values = sorted(set(h))
    samples = []
    for i, v in enumerate(values):
        samples.append((v, True))
        if i + 1 < len(values):
            w = values[i + 1]
            for j in range(1, samples_per_gap + 1):
                samples.append((v + (w - v) * j / (samples_per_gap + 1), False))
    layers = [_level_components(mesh, t) for t, _ in samples]
    horizontal = set()
    for tri in mesh.triangles:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])):
            if h[a] == h[b]:
                horizontal.add(h[a])

    def links(i):
        out = defaultdict(set)
        for x, cx in enumerate(layers[i]):
            for y, cy in enumerate(layers[i + 1]):
                if cx & cy:
                    out[x].add(y)
        return out

    ups = [links(i) for i in range(len(layers) - 1)]
    downs = []
    for i, up in enumerate(ups):
        d = defaultdict(set)
        for x, ys in up.items():
            for y in ys:
                d[y].add(x)
        downs.append(d)

    def has_flat(i, comp):
        t = samples[i][0]
        if t not in horizontal:
            return False
        for ti in comp:
            tri = mesh.triangles[ti]
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])):
                if h[a] == h[b] == t:
                    return True
        return False

    node_of = {}
    nodes = []
    for i, (t, at_vertex) in enumerate(samples):
        if not at_vertex:
            continue
        for x, comp in enumerate(layers[i]):
            n_down = len(downs[i - 1][x]) if i > 0 else 0
            n_up = len(ups[i][x]) if i < len(ups) else 0
            flat = has_flat(i, comp)
            if flat or n_down != 1 or n_up != 1:
                node_of[(i, x)] = len(nodes)
                nodes.append(ReebNode(len(nodes), t / mesh.scale, flat))
    arcs = []
    for (i, x), nid in sorted(node_of.items()):
        for y in sorted(ups[i][x]) if i < len(ups) else ():
            j, z = i + 1, y
            while (j, z) not in node_of:
                (z,) = ups[j][z]
                j += 1
            arcs.append(ReebArc(len(arcs), nid, node_of[(j, z)]))
    return ReebGraph(tuple(nodes), tuple(arcs))


def spanning_count(graph: LabeledGraph, t: Fraction) -> int:
    """Number of edges whose height range contains ``t`` in its interior."""
    count = 0
    for e in graph.edges:
        a, b = sorted(graph.height(v) for v in e.ends)
        if a < t < b:
            count += 1
    return count


def census_by_level(reeb: ReebGraph) -> dict[Fraction, int]:
    """Arc census entries grouped by sample level; the count of circles at each."""
    out: dict[Fraction, int] = defaultdict(int)
    for a in reeb.arcs:
        for c in a.census:
            out[c.level] += 1
    return dict(out)


def monotone_transform(graph: LabeledGraph, rng: Optional[random.Random] = None) -> LabeledGraph:
    """Apply a random strictly increasing map to all heights."""
    rng = rng or random.Random(0)
    values = sorted({graph.height(v) for v in graph.vertices})
    image = {}
    level = Fraction(rng.randint(-10, 10))
    for v in values:
        level += Fraction(rng.randint(1, 7), rng.randint(1, 4))
        image[v] = level
    return graph.with_heights({v: image[graph.height(v)] for v in graph.vertices})
