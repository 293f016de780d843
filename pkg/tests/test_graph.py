import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reebreal.graph import LabeledGraph, Sphere, StructuralError, Surface, label_from_json, \
    label_to_json, local_extrema, surgery, synthesize_good_function, validate_good_function, \
    validate_hypotheses
from reebreal.oracles import exhaustive_feasible, monotone_transform, random_multigraph

B = LabeledGraph.build


def path(n, dim=2, labels=None):
    labels = labels or {}
    return B(dim, [(f"v{i}", i) for i in range(n)],
             [(f"e{i}", f"v{i}", f"v{i + 1}", labels.get(i, Sphere())) for i in range(n - 1)])


class TestGoodFunction:
    def test_distinct_heights_feasible(self):
        assert validate_good_function(path(2)).feasible

    def test_equal_heights_reported(self):
        g = B(2, [("a", 1), ("b", 1)], [("e", "a", "b")])
        report = validate_good_function(g)
        assert report.rules() == ["good_function"]
        assert report.violations[0].ids == ("e",)

    def test_loop_reported(self):
        g = B(2, [("a", 0), ("b", 1)], [("e0", "a", "b"), ("loop", "a", "a")])
        assert "loop" in validate_good_function(g).rules()

    def test_dangling_endpoint_is_structural(self):
        g = B(2, [("a", 0)], [("e", "a", "zz")])
        with pytest.raises(StructuralError):
            validate_good_function(g)
        report = validate_hypotheses(g)
        assert report.structural and report.rules() == ["structure.dangling"]


class TestExtrema:
    def test_path(self):
        assert local_extrema(path(3)) == {"v0", "v2"}

    def test_star(self):
        g = B(2, [("c", 1), ("lo", 0), ("hi", 2)], [("a", "c", "lo"), ("b", "c", "hi")])
        assert local_extrema(g) == {"lo", "hi"}

    def test_triangle(self):
        g = B(2, [("a", 0), ("b", 1), ("c", 2)], [("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")])
        assert local_extrema(g) == {"a", "c"}

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000))
    def test_monotone_invariance(self, seed):
        rng = random.Random(seed)
        g = random_multigraph(rng, 7, 10)
        ranks = {v: rng.randint(0, 5) for v in g.vertices}
        g = g.with_heights(ranks)
        assert local_extrema(monotone_transform(g, rng)) == local_extrema(g)


class TestHypotheses:
    def test_triangle_infeasible(self):
        g = B(2, [("a", 0), ("b", 1), ("c", 2)], [("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")])
        report = validate_hypotheses(g)
        assert not report.feasible and not report.structural
        assert report.rules() == ["extremum_degree", "extremum_degree"]

    def test_single_edge_m3(self):
        assert validate_hypotheses(path(2, 3)).feasible

    def test_surface_at_extremum_edge(self):
        report = validate_hypotheses(path(3, 3, {0: Surface(genus=1)}))
        assert report.rules() == ["extremum_label"]

    def test_label_dimension_rules(self):
        assert "label.dimension" in validate_hypotheses(path(4, 2, {1: Surface(genus=1)})).rules()
        assert "label.dimension" in validate_hypotheses(path(4, 3, {1: surgery([[3]])})).rules()

    def test_odd_crosscaps_rejected(self):
        g = path(4, 3, {1: Surface(orientable=False, crosscaps=3)})
        assert validate_hypotheses(g).rules() == ["label.crosscaps"]

    def test_asymmetric_linking_matrix_rejected(self):
        g = path(4, 4, {1: surgery([[1, 2], [0, 1]])})
        assert validate_hypotheses(g).rules() == ["label.surgery"]

    def test_disconnected_and_empty(self):
        g = B(2, [("a", 0), ("b", 1), ("c", 0), ("d", 1)], [("x", "a", "b"), ("y", "c", "d")])
        assert "connected" in validate_hypotheses(g).rules()
        assert "nonempty" in validate_hypotheses(B(2, [("a", 0)], [])).rules()

    def test_missing_height_is_structural(self):
        g = B(2, ["a", ("b", 1)], [("x", "a", "b")])
        assert validate_hypotheses(g).rules() == ["structure.height_missing"]

    def test_deterministic_and_pure(self):
        g = path(4, 3, {1: Surface(genus=2)})
        before = g.to_json()
        assert validate_hypotheses(g) == validate_hypotheses(g)
        assert g.to_json() == before


class TestSynthesis:
    def test_path(self):
        g = B(2, ["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c")])
        heights = synthesize_good_function(g)
        assert heights
        assert validate_hypotheses(g.with_heights(heights)).feasible

    def test_four_cycle_infeasible(self):
        g = B(2, "abcd", [("w", "a", "b"), ("x", "b", "c"), ("y", "c", "d"), ("z", "d", "a")])
        assert not synthesize_good_function(g)

    def test_torus_shape(self):
        g = B(2, ["p", "a", "b", "q"],
              [("e0", "p", "a"), ("e1", "a", "b"), ("e2", "a", "b"), ("e3", "b", "q")])
        heights = synthesize_good_function(g)
        assert heights == {"p": 0, "a": 1, "b": 2, "q": 3}
        assert exhaustive_feasible(g)

    def test_loop_is_infeasible(self):
        g = B(2, ["a", "b"], [("e", "a", "b"), ("l", "b", "b")])
        assert not synthesize_good_function(g)

    def test_deterministic(self):
        g = random_multigraph(random.Random(3), 6, 9)
        assert synthesize_good_function(g) == synthesize_good_function(g)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**9))
    def test_agrees_with_exhaustive_oracle(self, seed):
        g = random_multigraph(random.Random(seed), 6, 9)
        heights = synthesize_good_function(g)
        assert bool(heights) == exhaustive_feasible(g)
        if heights:
            h = g.with_heights(heights)
            assert validate_good_function(h).feasible
            assert all(h.degree(v) == 1 for v in local_extrema(h))


class TestJson:
    def test_round_trip(self):
        g = B(4, [("a", 0), ("b", Fraction(1, 2)), ("c", 2), ("d", 3)],
              [("x", "a", "b"), ("y", "b", "c", surgery([[2, 1], [1, -3]])), ("z", "c", "d")])
        again = LabeledGraph.from_json(g.to_json())
        assert again == g
        assert g.to_json()["vertices"][1]["height"] == "1/2"

    def test_labels_round_trip(self):
        for lab in (Sphere(), Surface(genus=3), Surface(orientable=False, crosscaps=4),
                    surgery([]), surgery([[0]])):
            assert label_from_json(label_to_json(lab)) == lab

    def test_bad_documents(self):
        with pytest.raises(StructuralError):
            LabeledGraph.from_json({"dimension": 2, "vertices": [{"id": "a", "height": "x/y"}],
                                    "edges": []})
        with pytest.raises(StructuralError):
            label_from_json({"kind": "torus"})
        with pytest.raises(StructuralError):
            LabeledGraph.from_json({"dimension": "two", "vertices": [], "edges": []})

    def test_dimension_override(self):
        g = LabeledGraph.from_json(path(2).to_json(), dimension=5)
        assert g.dimension == 5
