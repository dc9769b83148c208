"""Hardness-instance chain: formula -> triangle-covered graph -> game."""

import random

import pytest

from sdgsolve.core import ScoringVector, SocialNetwork
from sdgsolve.oracle import brute_force_solve, decide_welfare_at_least
from sdgsolve.reductions import (
    NaeFormula,
    ctcg_to_sdg,
    format_nae_formula,
    is_three_colorable,
    nae_to_3ctcg,
    parse_nae_formula,
)
from sdgsolve.generators import random_nae_formula


class TestConstruction:
    def test_single_variable_no_clauses(self):
        H = nae_to_3ctcg(NaeFormula(1, ()))
        assert H.graph.n == 3
        assert len(H.triangles) == 1
        assert len(H.graph.edges) == 3

    def test_single_clause_three_vars_edge_count(self):
        formula = NaeFormula(3, ((1, 2, 3),))
        H = nae_to_3ctcg(formula)
        assert H.graph.n == 12
        assert len(H.triangles) == 4
        # 4 triangles + 2 chain links of 2 edges + 3 clause-literal edges
        assert len(H.graph.edges) == 12 + 4 + 3 == 19

    def test_nae_satisfiable_gives_colorable(self):
        rng = random.Random(5)
        for seed in range(10):
            formula = random_nae_formula(rng.randrange(1, 4), rng.randrange(0, 3), seed)
            H = nae_to_3ctcg(formula)
            if formula.nae_satisfiable():
                assert is_three_colorable(H.graph)
            else:
                assert not is_three_colorable(H.graph)


class TestSdgInstance:
    def test_single_triangle(self):
        H = nae_to_3ctcg(NaeFormula(1, ()))
        G, b = ctcg_to_sdg(H, ScoringVector((1,)))
        assert G.n == 3 and len(G.edges) == 0
        assert b == 0

    def test_two_triangles_complement_k33(self):
        # two disjoint triangles: graph on 6 vertices, complement is K_{3,3}
        tri = SocialNetwork(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        from sdgsolve.reductions import TriangleCoveredGraph

        H = TriangleCoveredGraph(tri, ((0, 1, 2), (3, 4, 5)))
        G, b = ctcg_to_sdg(H, ScoringVector((1,)))
        assert b == 3 * 2 * 1 * 1 == 6
        assert len(G.edges) == 9
        res = brute_force_solve(ScoringVector((1,)), G, "welfare")
        assert res.welfare == 6
        assert all(len(block) == 2 for block in res.outcome)

    def test_rejects_wide_vectors(self):
        H = nae_to_3ctcg(NaeFormula(1, ()))
        with pytest.raises(ValueError):
            ctcg_to_sdg(H, ScoringVector((1, 0)))


class TestRoundTrip:
    @pytest.mark.parametrize("seed", range(8))
    def test_colorable_iff_target_reachable(self, seed):
        rng = random.Random(40 + seed)
        # keep total triangles <= 4 so the oracle stays in reach
        n_vars = rng.randrange(1, 4)
        n_clauses = rng.randrange(0, min(3, 5 - n_vars))
        formula = random_nae_formula(n_vars, n_clauses, seed)
        H = nae_to_3ctcg(formula)
        s = ScoringVector((1,))
        G, b = ctcg_to_sdg(H, s)
        reachable = decide_welfare_at_least(s, G, b, "welfare")
        assert reachable == is_three_colorable(H.graph)


class TestDimacs:
    def test_round_trip(self):
        formula = NaeFormula(3, ((1, -2, 3), (-1, 2, -3)))
        assert parse_nae_formula(format_nae_formula(formula)) == formula

    def test_requires_marker(self):
        with pytest.raises(ValueError):
            parse_nae_formula("p cnf 3 1\n1 2 3 0\n")
