"""Seeded oracle suites behind ``reebreal selftest``.

Each suite checks a production routine against an independent computation
and stops collecting examples after the first few failures.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import synthesize_good_function, validate_hypotheses
from .handles import boundary_invariants, euler_characteristic
from .morse import assemble, euler_char_of_plan
from .oracles import brute_force_reeb, exhaustive_feasible, random_feasible_graph, \
    random_matrix, random_multigraph, random_plan, random_unimodular
from .reeb import compute_reeb, reeb_isomorphic
from .surface import realize_surface
from .verify import verify_graph
from .zalgebra import IntMatrix, cokernel_invariants, determinant, smith_normal_form


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, what) -> None:
        if len(self.failures) < 5:
            self.failures.append(what)

    def to_json(self) -> dict:
        return {"suite": self.name, "cases": self.cases, "passed": self.passed,
                "failures": self.failures}


def snf_ok(a: IntMatrix) -> bool:
    u, s, v = smith_normal_form(a)
    if (u @ a) @ v != s or abs(determinant(u)) != 1 or abs(determinant(v)) != 1:
        return False
    if not s.is_diagonal():
        return False
    d = s.diagonal()
    if any(x < 0 for x in d):
        return False
    for x, y in zip(d, d[1:]):
        if x == 0 and y != 0 or x and y % x:
            return False
    if a.is_square and a.rows:
        det = determinant(a)
        if det:
            inv = cokernel_invariants(a)
            prod = 1
            for t in inv.torsion:
                prod *= t
            if inv.free_rank or prod != abs(det):
                return False
    return True


def suite_synthesis(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("synthesis_vs_exhaustive")
    for _ in range(n):
        g = random_multigraph(rng, 6, 9)
        res.cases += 1
        if bool(synthesize_good_function(g)) != exhaustive_feasible(g):
            res.fail(g.to_json())
    return res


def suite_snf(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("smith_normal_form")
    for _ in range(n):
        a = random_matrix(rng)
        res.cases += 1
        if not snf_ok(a):
            res.fail(a.tolist())
            continue
        if a.is_square:
            p, q = random_unimodular(rng, a.rows), random_unimodular(rng, a.rows)
            if cokernel_invariants((p @ a) @ q) != cokernel_invariants(a):
                res.fail({"presentation": a.tolist()})
    return res


def suite_handles(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("handle_calculus")
    for _ in range(n):
        m = rng.choice((2, 3, 4, 5))
        plan = random_plan(rng, m)
        res.cases += 1
        comps = boundary_invariants(plan).components
        total = sum(c.chi for c in comps)
        if m % 2 and total != 2 * euler_characteristic(plan):
            res.fail(plan.to_json())
        if m % 2 == 0 and any(c.chi for c in comps):
            res.fail(plan.to_json())
    return res


def suite_plans(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("plan_verification")
    for _ in range(n):
        m = rng.choice((3, 4))
        g = random_feasible_graph(rng, m)
        res.cases += 1
        report = verify_graph(g)
        if not report.passed:
            res.fail(g.to_json())
    return res


def suite_surfaces(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("surface_round_trip")
    for _ in range(n):
        g = random_feasible_graph(rng, 2)
        res.cases += 1
        if not verify_graph(g).passed:
            res.fail(g.to_json())
    return res


def suite_reeb_oracle(rng: random.Random, n: int, max_triangles: int = 300) -> SuiteResult:
    res = SuiteResult("reeb_vs_brute_force")
    while res.cases < n:
        g = random_feasible_graph(rng, 2, max_vertices=8, max_edges=10)
        mesh = realize_surface(assemble(g))
        if len(mesh.triangles) > max_triangles:
            continue
        res.cases += 1
        if reeb_isomorphic(compute_reeb(mesh), brute_force_reeb(mesh)) is None:
            res.fail(g.to_json())
    return res


def suite_odd_euler(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("odd_dimension_euler")
    for _ in range(n):
        g = random_feasible_graph(rng, 3)
        res.cases += 1
        if not validate_hypotheses(g).feasible or euler_char_of_plan(assemble(g)).value != 0:
            res.fail(g.to_json())
    return res


def run(seed: int = 0, full: bool = False) -> list[SuiteResult]:
    scale = 4 if full else 1
    out = []
    for i, (suite, n) in enumerate(((suite_synthesis, 1250), (suite_snf, 500),
                                    (suite_handles, 200), (suite_odd_euler, 50),
                                    (suite_plans, 50), (suite_surfaces, 50),
                                    (suite_reeb_oracle, 12))):
        out.append(suite(random.Random(seed * 1000 + i), n * scale))
    return out
