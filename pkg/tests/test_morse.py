import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reebreal.graph import HypothesisReport, LabeledGraph, Sphere, Surface, local_extrema, surgery
from reebreal.morse import INTERNAL, MAX, MIN, HypothesisError, assemble, build_extremum_block, \
    build_internal_block, euler_char_of_plan, reeb_of_plan
from reebreal.oracles import random_feasible_graph
from reebreal.reeb import reeb_isomorphic
from reebreal.verify import euler_from_pieces

B = LabeledGraph.build


def path4(dim, middle):
    return B(dim, [(f"v{i}", i) for i in range(4)],
             [("e0", "v0", "v1"), ("e1", "v1", "v2", middle), ("e2", "v2", "v3")])


TORUS = B(2, [("p", 0), ("a", 1), ("b", 2), ("q", 3)],
          [("e0", "p", "a"), ("e1", "a", "b"), ("e2", "a", "b"), ("e3", "b", "q")])
YTREE = B(2, [("lo", 0), ("c", 1), ("h1", 2), ("h2", 3)],
          [("e0", "lo", "c"), ("e1", "c", "h1"), ("e2", "c", "h2")])


class TestBlocks:
    def test_min_cap(self):
        g = B(3, [("a", 0), ("b", 1)], [("e", "a", "b")])
        block = build_extremum_block(g, "a")
        assert (block.kind, block.indices, block.value) == (MIN, (0,), 0)

    def test_max_cap(self):
        g = B(4, [("a", 0), ("b", 5)], [("e", "a", "b")])
        block = build_extremum_block(g, "b")
        assert (block.kind, block.indices, block.value) == (MAX, (4,), 5)

    def test_cap_of_degree_two(self):
        g = B(2, [("a", 0), ("b", 1), ("c", 2)], [("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")])
        with pytest.raises(HypothesisError):
            build_extremum_block(g, "a")

    def test_internal_m3(self):
        block = build_internal_block("v", 1, [Sphere()], [Surface(genus=1)], 3)
        assert block.upper_plan.indices() == [1]
        assert sorted(block.lower_plan.indices()) == [1, 2]
        assert block.indices == (1, 1, 2)

    def test_internal_m2(self):
        block = build_internal_block("v", 1, [Sphere(), Sphere()], [Sphere()], 2)
        assert block.indices == (1, 1, 1)
        assert len(block.lower_plan.handles) == 1 and len(block.upper_plan.handles) == 2

    def test_internal_m4(self):
        block = build_internal_block("v", 1, [Sphere()], [surgery([[3]])], 4)
        assert block.upper_plan.indices() == [2]
        assert block.indices == (1, 2, 3)

    def test_empty_side(self):
        with pytest.raises(HypothesisError):
            build_internal_block("v", 0, [], [Sphere()], 3)


class TestAssemble:
    def test_single_edge(self):
        plan = assemble(B(3, [("a", 0), ("b", 1)], [("e", "a", "b")]))
        assert plan.counts == (1, 0, 0, 1)
        assert euler_char_of_plan(plan).value == 0
        assert [s.labels for s in plan.slices] == [(Sphere(),)]

    def test_path_genus_one(self):
        plan = assemble(path4(3, Surface(genus=1)))
        assert plan.counts == (1, 3, 3, 1)
        assert euler_char_of_plan(plan).ok and plan.orientable == "yes"

    def test_torus_shape(self):
        # three saddles per cycle vertex: each carries the two-handle sphere plan on one side
        plan = assemble(TORUS)
        assert plan.counts == (1, 6, 1)
        assert euler_char_of_plan(plan).value == -4

    def test_ytree(self):
        assert assemble(YTREE).counts == (1, 3, 2)

    def test_m4_single_edge(self):
        plan = assemble(B(4, [("a", 0), ("b", 1)], [("e", "a", "b")]))
        assert plan.counts == (1, 0, 0, 0, 1) and euler_char_of_plan(plan).value == 2

    def test_infeasible_returns_report(self):
        g = B(2, [("a", 0), ("b", 1), ("c", 2)], [("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")])
        assert isinstance(assemble(g), HypothesisReport)

    def test_orientability_flag(self):
        assert assemble(path4(4, surgery([[2]]))).orientable == "yes"
        assert assemble(path4(3, Surface(orientable=False, crosscaps=2))).orientable == "unknown"
        assert assemble(TORUS).orientable == "unknown"

    def test_intervals_inside_star(self):
        g = B(3, [("a", 0), ("b", Fraction(1, 3)), ("c", 2)], [("x", "a", "b"), ("y", "b", "c")])
        plan = assemble(g)
        b = plan.block("b")
        assert b.interval == (Fraction(2, 9), Fraction(4, 9))
        for t in plan.tubes:
            assert g.height(t.lower) < t.interval[0] < t.interval[1] < g.height(t.upper)

    def test_equal_critical_values(self):
        g = B(2, [("lo", 0), ("c", 1), ("h1", 2), ("h2", 2)],
              [("e0", "lo", "c"), ("e1", "c", "h1"), ("e2", "c", "h2")])
        plan = assemble(g)
        assert plan.critical_values == (0, 1, 2)
        assert len(reeb_of_plan(plan).vertices) == 4

    def test_reeb_of_plan(self):
        rebuilt = reeb_of_plan(assemble(path4(3, Surface(genus=1))))
        assert [rebuilt.height(v) for v in rebuilt.vertices] == [0, 1, 2, 3]
        assert rebuilt.edge("e1").label == Surface(genus=1)
        assert reeb_isomorphic(reeb_of_plan(assemble(TORUS)), TORUS) is not None

    def test_plan_json(self):
        doc = assemble(path4(4, surgery([[3]]))).to_json()
        assert doc["morse_counts"] == [1, 2, 2, 2, 1]
        assert doc["blocks"][1]["upper_plan"]["handles"][0]["framing"] == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([2, 3, 4]))
def test_plan_properties(seed, m):
    g = random_feasible_graph(random.Random(seed), m, max_vertices=9, max_edges=12)
    plan = assemble(g)
    extrema = local_extrema(g)
    minima = {v for v in extrema if all(g.height(w) > g.height(v) for w in g.neighbors(v))}
    assert plan.counts[0] == len(minima) and plan.counts[m] == len(extrema) - len(minima)
    check = euler_char_of_plan(plan)
    if m % 2:
        assert check.value == 0
    assert euler_from_pieces(plan) == check.value
    assert reeb_isomorphic(reeb_of_plan(plan), g) is not None
    for b in plan.blocks:
        assert b.value == g.height(b.vertex)
        if b.kind == INTERNAL:
            assert all(1 <= k <= m - 1 for k in b.indices)
    for s in plan.slices:
        t = (s.low + s.high) / 2
        spanning = sorted(e.id for e in g.edges
                          if min(map(g.height, e.ends)) < t < max(map(g.height, e.ends)))
        assert sorted(s.edges) == spanning
