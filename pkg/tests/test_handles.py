import random

import pytest
from hypothesis import given, settings, strategies as st

from reebreal.graph import Sphere, StructuralError, Surface, Surgery, surgery
from reebreal.handles import Handle, HandlebodyPlan, LabelError, attach_plan_for_boundary, \
    boundary_invariants, check_plan, euler_characteristic, sphere_plan, target_matches
from reebreal.oracles import random_plan
from reebreal.zalgebra import AbelianInvariants, IntMatrix, cokernel_invariants


def random_targets(rng, m):
    out = []
    for _ in range(rng.randint(1, 4)):
        if m == 3:
            if rng.random() < 0.3:
                out.append(Surface(orientable=False, crosscaps=rng.choice((2, 4, 6))))
            else:
                out.append(Surface(genus=rng.randint(0, 5)))
        else:
            n = rng.randint(0, 4)
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1):
                    rows[i][j] = rows[j][i] = rng.randint(-5, 5)
            out.append(surgery(rows))
    return out


class TestAttach:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_sphere_plan(self, m):
        plan = attach_plan_for_boundary(m, [Sphere()])
        assert sorted(plan.indices()) == sorted([1, m - 1])
        (comp,) = boundary_invariants(plan).components
        assert target_matches(comp, Sphere(), m)

    def test_sphere_m3_invariants(self):
        (comp,) = boundary_invariants(sphere_plan(3)).components
        assert (comp.chi, comp.orientable, comp.genus) == (2, True, 0)

    def test_sphere_m4_homology_trivial(self):
        (comp,) = boundary_invariants(sphere_plan(4)).components
        assert comp.h1.trivial and comp.orientable

    def test_two_surfaces(self):
        plan = attach_plan_for_boundary(3, [Surface(genus=1), Surface(genus=2)])
        assert sorted(plan.indices()) == [1, 1, 1, 2]
        comps = boundary_invariants(plan).components
        assert [c.chi for c in comps] == [0, -2]
        assert [c.genus for c in comps] == [1, 2]

    def test_lens(self):
        plan = attach_plan_for_boundary(4, [surgery([[3]])])
        assert plan.handles == (Handle(2, 0, framing=3),)
        (comp,) = boundary_invariants(plan).components
        assert comp.h1 == AbelianInvariants(0, (3,))

    def test_errors(self):
        with pytest.raises(ValueError):
            attach_plan_for_boundary(3, [])
        with pytest.raises(LabelError):
            attach_plan_for_boundary(3, [surgery([[1]])])
        with pytest.raises(LabelError):
            attach_plan_for_boundary(4, [Surface(genus=1)])

    def test_deterministic(self):
        t = [Surface(genus=2), Surface(orientable=False, crosscaps=4)]
        assert attach_plan_for_boundary(3, t) == attach_plan_for_boundary(3, t)

    def test_round_trip_200(self):
        rng = random.Random(2024)
        for _ in range(200):
            m = rng.choice((3, 4))
            targets = random_targets(rng, m)
            comps = boundary_invariants(attach_plan_for_boundary(m, targets)).components
            assert len(comps) == len(targets)
            for c, t in zip(comps, targets):
                assert target_matches(c, t, m)
                if m == 4:
                    assert c.h1 == cokernel_invariants(IntMatrix.from_rows(t.matrix, t.size))


class TestEuler:
    def test_examples(self):
        assert euler_characteristic(HandlebodyPlan(3, (Handle(1, 0), Handle(2, 0)))) == 1
        assert euler_characteristic(HandlebodyPlan(3, (Handle(1, 0), Handle(1, 0)))) == -1
        assert euler_characteristic(HandlebodyPlan(3, ())) == 1

    def test_empty_plan_invalid(self):
        with pytest.raises(StructuralError):
            check_plan(HandlebodyPlan(3, ()))


class TestBoundary:
    def test_klein(self):
        plan = HandlebodyPlan(3, (Handle(1, 0, orientation_preserving=False),))
        (comp,) = boundary_invariants(plan).components
        assert (comp.orientable, comp.crosscaps, comp.chi) == (False, 2, 0)
        assert comp.h1 == AbelianInvariants(1, (2,))

    def test_zero_framed(self):
        (comp,) = boundary_invariants(HandlebodyPlan(4, (Handle(2, 0, framing=0),))).components
        assert comp.h1 == AbelianInvariants(1)

    def test_linked_pair(self):
        plan = HandlebodyPlan(4, (Handle(2, 0, framing=2), Handle(2, 0, framing=2, linking=((0, 1),))))
        (comp,) = boundary_invariants(plan).components
        assert comp.h1 == AbelianInvariants(0, (3,))

    def test_missing_component(self):
        with pytest.raises(StructuralError):
            boundary_invariants(HandlebodyPlan(3, (Handle(1, 4),)))

    def test_bridge_merges(self):
        plan = HandlebodyPlan(3, (Handle(2, 0), Handle(1, 0), Handle(1, 1, component_to=0)))
        (comp,) = boundary_invariants(plan).components
        assert comp.genus == 1

    def test_m2_bands(self):
        split = boundary_invariants(HandlebodyPlan(2, (Handle(1, 0),)))
        twist = boundary_invariants(HandlebodyPlan(2, (Handle(1, 0, orientation_preserving=False),)))
        assert len(split.components) == 2 and len(twist.components) == 1

    def test_json_round_trip(self):
        plan = attach_plan_for_boundary(4, [surgery([[1, 2], [2, 0]]), Surgery()])
        assert HandlebodyPlan.from_json(plan.to_json()) == plan

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10**9), st.sampled_from([2, 3, 4, 5, 7]))
    def test_euler_relations(self, seed, m):
        plan = random_plan(random.Random(seed), m)
        comps = boundary_invariants(plan).components
        if m % 2:
            assert sum(c.chi for c in comps) == 2 * euler_characteristic(plan)
        else:
            assert all(c.chi == 0 for c in comps)
