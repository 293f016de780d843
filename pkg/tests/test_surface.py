import json
import random
from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from reebreal.graph import LabeledGraph
from reebreal.morse import assemble, euler_char_of_plan
from reebreal.oracles import random_feasible_graph
from reebreal.surface import NonManifoldError, TriangulatedSurface, check_manifold, \
    plateau_ribbon, realize_surface, surface_invariants

MESHES = Path(__file__).resolve().parent.parent / "samples" / "meshes"
B = LabeledGraph.build


def load(name):
    return TriangulatedSurface.from_json(json.loads((MESHES / f"{name}.json").read_text()))


def coherent(mesh):
    darts = Counter()
    for a, b, c in mesh.triangles:
        for x, y in ((a, b), (b, c), (c, a)):
            darts[(x, y)] += 1
    return all(n == 1 and darts[(y, x)] == 1 for (x, y), n in darts.items())


class TestInvariants:
    def test_tetrahedron(self):
        inv = surface_invariants(load("tetrahedron"))
        assert (inv.chi, inv.orientable, inv.genus) == (2, True, 0)

    def test_seven_vertex_torus(self):
        mesh = load("torus7")
        assert (mesh.n_vertices, len(mesh.edges()), len(mesh.triangles)) == (7, 21, 14)
        inv = surface_invariants(mesh)
        assert (inv.chi, inv.orientable, inv.genus) == (0, True, 1)

    def test_edge_in_three_triangles(self):
        tris = ((0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2), (0, 1, 4))
        with pytest.raises(NonManifoldError) as err:
            check_manifold(TriangulatedSurface((0, 1, 2, 3, 4), tris))
        assert (0, 1) in err.value.edges

    def test_pinched_vertex(self):
        # two tetrahedra sharing one vertex
        a = ((0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2))
        b = tuple(tuple(x if x == 0 else x + 3 for x in t) for t in a)
        with pytest.raises(NonManifoldError) as err:
            check_manifold(TriangulatedSurface(tuple(range(7)), a + b))
        assert 0 in err.value.vertices

    def test_projective_plane(self):
        tris = ((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
                (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3))
        inv = surface_invariants(TriangulatedSurface(tuple(range(6)), tris))
        assert (inv.chi, inv.orientable, inv.genus) == (1, False, 1)

    def test_json_round_trip(self):
        mesh = load("octahedron")
        assert TriangulatedSurface.from_json(mesh.to_json()) == mesh


class TestRibbon:
    @pytest.mark.parametrize("saddles,circles", [(1, 1), (1, 3), (2, 2), (3, 3), (4, 2), (5, 5)])
    def test_counts(self, saddles, circles):
        rib, faces = plateau_ribbon(saddles, circles)
        assert rib.n_vertices - len(rib.ends) == -saddles
        assert len(faces) == circles

    def test_parity_rejected(self):
        with pytest.raises(ValueError):
            plateau_ribbon(2, 1)


class TestRealize:
    def test_single_edge(self):
        mesh = realize_surface(assemble(B(2, [("a", 0), ("b", 1)], [("e", "a", "b")])))
        assert surface_invariants(mesh).chi == 2

    def test_ytree(self):
        g = B(2, [("lo", 0), ("c", 1), ("h1", 2), ("h2", 3)],
              [("e0", "lo", "c"), ("e1", "c", "h1"), ("e2", "c", "h2")])
        inv = surface_invariants(realize_surface(assemble(g)))
        assert (inv.chi, inv.genus) == (0, 1)

    def test_torus_shape_matches_plan(self):
        g = B(2, [("p", 0), ("a", 1), ("b", 2), ("q", 3)],
              [("e0", "p", "a"), ("e1", "a", "b"), ("e2", "a", "b"), ("e3", "b", "q")])
        plan = assemble(g)
        inv = surface_invariants(realize_surface(plan))
        assert inv.chi == euler_char_of_plan(plan).value == -4

    def test_rejects_other_dimensions(self):
        with pytest.raises(ValueError):
            realize_surface(assemble(B(3, [("a", 0), ("b", 1)], [("e", "a", "b")])))

    def test_plateaus_only_at_critical_values(self):
        g = B(2, [("lo", 0), ("c", "1/2"), ("h1", 2), ("h2", 3)],
              [("e0", "lo", "c"), ("e1", "c", "h1"), ("e2", "c", "h2")])
        plan = assemble(g)
        mesh = realize_surface(plan)
        critical = {int(v * mesh.scale) for v in plan.critical_values}
        for a, b in mesh.edges():
            if mesh.heights[a] == mesh.heights[b]:
                assert mesh.heights[a] in critical


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_realization_properties(seed):
    g = random_feasible_graph(random.Random(seed), 2, max_vertices=10, max_edges=13)
    plan = assemble(g)
    mesh = realize_surface(plan)
    inv = surface_invariants(mesh)
    assert inv.orientable and coherent(mesh)
    assert inv.chi == euler_char_of_plan(plan).value
    assert inv.genus >= len(g.edges) - len(g.vertices) + 1
