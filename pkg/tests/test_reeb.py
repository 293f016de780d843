import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from reebreal import reeb
from reebreal.graph import LabeledGraph
from reebreal.morse import assemble
from reebreal.oracles import brute_force_reeb, random_feasible_graph, spanning_count
from reebreal.reeb import compute_reeb, graph_dot, prepare_arrays, reeb_dot, reeb_isomorphic, \
    sweep_backend
from reebreal.surface import TriangulatedSurface, realize_surface

MESHES = Path(__file__).resolve().parent.parent / "samples" / "meshes"
B = LabeledGraph.build
TORUS = B(2, [("p", 0), ("a", 1), ("b", 2), ("q", 3)],
          [("e0", "p", "a"), ("e1", "a", "b"), ("e2", "a", "b"), ("e3", "b", "q")])


def load(name):
    return TriangulatedSurface.from_json(json.loads((MESHES / f"{name}.json").read_text()))


def backends():
    return ["python", "cython"] if reeb.BACKEND == "cython" else ["python"]


class TestExtraction:
    def test_octahedron(self):
        r = compute_reeb(load("octahedron"))
        assert len(r.nodes) == 2 and len(r.arcs) == 1
        assert reeb_isomorphic(r, brute_force_reeb(load("octahedron"))) is not None

    def test_seven_vertex_torus(self):
        r = compute_reeb(load("torus7"))
        assert [n.height for n in r.nodes] == [0, 5, 10, 20]
        pairs = sorted((a.lower, a.upper) for a in r.arcs)
        assert pairs == [(0, 1), (1, 2), (1, 2), (2, 3)]
        assert reeb_isomorphic(r, brute_force_reeb(load("torus7"))) is not None

    def test_single_edge_realization(self):
        g = B(2, [("a", 0), ("b", 1)], [("e", "a", "b")])
        r = compute_reeb(realize_surface(assemble(g)))
        assert [n.height for n in r.nodes] == [0, 1] and len(r.arcs) == 1

    def test_plateau_is_one_node(self):
        r = compute_reeb(realize_surface(assemble(TORUS)))
        assert [n.plateau for n in r.nodes] == [False, True, True, False]
        assert reeb_isomorphic(r, TORUS) == {0: "p", 1: "a", 2: "b", 3: "q"}

    def test_census_counts(self):
        r = compute_reeb(realize_surface(assemble(TORUS)))
        for arc in r.arcs:
            for c in arc.census:
                assert c.circle and c.chi == 0
        levels = {c.level for a in r.arcs for c in a.census}
        for t in levels:
            n = sum(1 for a in r.arcs for c in a.census if c.level == t)
            assert n == spanning_count(TORUS, t)

    @pytest.mark.parametrize("name", ["tetrahedron", "octahedron", "torus7"])
    def test_backends_agree_on_corpus(self, name):
        levels, *arrays = prepare_arrays(load(name))
        results = [sweep_backend(b)(*arrays, len(levels)) for b in backends()]
        norm = [(list(map(int, a)), list(map(int, b)), [tuple(map(int, r)) for r in c])
                for a, b, c in results]
        assert all(x == norm[0] for x in norm)

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            sweep_backend("fortran")


class TestIsomorphism:
    def test_identical_paths(self):
        g = B(2, [("a", 0), ("b", 1), ("c", 2)], [("x", "a", "b"), ("y", "b", "c")])
        assert reeb_isomorphic(g, g) == {"a": "a", "b": "b", "c": "c"}

    def test_path_vs_ytree(self):
        p = B(2, [("a", 0), ("b", 1), ("c", 2), ("d", 3)],
              [("x", "a", "b"), ("y", "b", "c"), ("z", "c", "d")])
        y = B(2, [("a", 0), ("b", 1), ("c", 2), ("d", 3)],
              [("x", "a", "b"), ("y", "b", "c"), ("z", "b", "d")])
        assert reeb_isomorphic(p, y) is None

    def test_multiplicity(self):
        double = B(2, [("a", 0), ("b", 1)], [("x", "a", "b"), ("y", "a", "b")])
        single = B(2, [("a", 0), ("b", 1), ("c", 2)], [("x", "a", "b"), ("y", "b", "c")])
        assert reeb_isomorphic(double, single) is None

    def test_heights_respected(self):
        g = B(2, [("a", 0), ("b", 1)], [("x", "a", "b")])
        h = B(2, [("a", 0), ("b", 2)], [("x", "a", "b")])
        assert reeb_isomorphic(g, h) is None


class TestExport:
    def test_dot(self):
        text = graph_dot(TORUS)
        assert 'height="0"' in text and 'label="S"' in text
        assert reeb_dot(compute_reeb(load("torus7"))).count("--") == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_matches_brute_force_and_input(seed):
    g = random_feasible_graph(random.Random(seed), 2, max_vertices=7, max_edges=9)
    mesh = realize_surface(assemble(g))
    found = {b: compute_reeb(mesh, backend=b) for b in backends()}
    for r in found.values():
        assert reeb_isomorphic(r, g) is not None
    assert reeb_isomorphic(found["python"], brute_force_reeb(mesh)) is not None
    if "cython" in found:
        assert found["cython"] == found["python"]
