import numpy as np
import pytest

from sparsecut import (InputError, WeightedGraphPair, courant_fisher_check,
                       exact_sparsest_cut, formulate, slow_sdp_check, solve,
                       sparsity)

from conftest import brute_force_phi_star, four_cycle_complete, random_pair


class TestExactSparsestCut:
    def test_two_vertices(self):
        g = WeightedGraphPair.from_edges(2, [(0, 1, 3.0)], [(0, 1, 2.0)])
        res = exact_sparsest_cut(g)
        assert res.sparsity == pytest.approx(1.5)

    def test_four_cycle_witness_is_adjacent_pair(self):
        g = four_cycle_complete()
        res = exact_sparsest_cut(g)
        assert res.sparsity == 0.5
        # the minimum is achieved only by adjacent pairs (opposite pairs cut
        # all four cycle edges and give sparsity 1)
        verts = res.cut.vertices()
        assert len(verts) == 2
        assert verts not in ([0, 2], [1, 3])

    def test_cost_equals_demand(self, rng):
        g = random_pair(6, rng)
        same = WeightedGraphPair(6, dict(g.demand), dict(g.demand))
        assert exact_sparsest_cut(same).sparsity == pytest.approx(1.0)

    def test_matches_independent_enumeration(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 9))
            g = random_pair(n, rng, demand_p=0.5)
            assert exact_sparsest_cut(g).sparsity == pytest.approx(
                brute_force_phi_star(g), abs=1e-12)

    def test_relabeling_invariance(self, rng):
        for _ in range(10):
            n = int(rng.integers(3, 9))
            g = random_pair(n, rng)
            perm = rng.permutation(n)
            relabel = lambda w: {tuple(sorted((int(perm[i]), int(perm[j])))): v
                                 for (i, j), v in w.items()}
            h = WeightedGraphPair(n, relabel(g.cost), relabel(g.demand))
            a, b = exact_sparsest_cut(g), exact_sparsest_cut(h)
            assert a.sparsity == pytest.approx(b.sparsity, abs=1e-12)
            # the witness maps through the relabeling up to complement
            mapped = {int(perm[v]) for v in a.cut.vertices()}
            found = set(b.cut.vertices())
            assert mapped in (found, set(range(n)) - found) or \
                sparsity(h, b.cut).sparsity == pytest.approx(a.sparsity)

    def test_budget_enforced(self):
        g = WeightedGraphPair.from_edges(25, [(0, 1, 1.0)], [(0, 1, 1.0)])
        with pytest.raises(InputError):
            exact_sparsest_cut(g)

    def test_tie_break_smallest_encoding(self):
        # two disjoint identical edges: several optimal cuts, the smallest
        # encoding containing vertex 0 must win
        g = WeightedGraphPair.from_edges(
            4, [(0, 1, 1.0), (2, 3, 1.0)], [(0, 1, 1.0), (2, 3, 1.0)])
        res = exact_sparsest_cut(g)
        assert res.cut.vertices() == [0]


class TestSlowSdpCheck:
    def test_two_vertices_closed_form(self):
        g = WeightedGraphPair.from_edges(2, [(0, 1, 3.0)], [(0, 1, 2.0)])
        assert slow_sdp_check(formulate(g)) == pytest.approx(1.5, abs=1e-6)

    def test_unit_triangle_cost_equals_demand(self):
        tri = [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]
        g = WeightedGraphPair.from_edges(3, tri, tri)
        assert slow_sdp_check(formulate(g)) == pytest.approx(1.0, abs=1e-6)

    def test_cross_validates_fast_solver(self):
        g = four_cycle_complete()
        problem = formulate(g)
        fast = solve(problem).objective_value
        slow = slow_sdp_check(problem)
        assert np.isclose(fast, slow, rtol=1e-3, atol=1e-6)

    def test_random_instances_agree(self, rng):
        for _ in range(5):
            g = random_pair(int(rng.integers(3, 8)), rng)
            problem = formulate(g)
            fast = solve(problem).objective_value
            slow = slow_sdp_check(problem)
            assert np.isclose(fast, slow, rtol=1e-3, atol=1e-6)

    def test_budget_enforced(self):
        g = WeightedGraphPair.from_edges(9, [(0, 1, 1.0)], [(0, 1, 1.0)])
        with pytest.raises(InputError):
            slow_sdp_check(formulate(g))


class TestCourantFisher:
    def test_cost_equals_demand_equality(self, rng):
        g = random_pair(5, rng)
        same = WeightedGraphPair(5, dict(g.demand), dict(g.demand))
        check = courant_fisher_check(same)
        assert check.holds
        assert check.lambda_1 == pytest.approx(1.0, abs=1e-9)
        assert check.phi_star == pytest.approx(1.0)

    def test_disconnected_cost_demand_across(self):
        cost = [(0, 1, 1.0), (2, 3, 1.0)]
        demand = [(0, 2, 1.0), (1, 3, 1.0), (0, 3, 1.0)]
        g = WeightedGraphPair.from_edges(4, cost, demand)
        check = courant_fisher_check(g)
        assert check.holds
        assert check.lambda_1 == pytest.approx(0.0, abs=1e-9)
        assert check.phi_star == pytest.approx(0.0)

    def test_random_instances(self, rng):
        for _ in range(15):
            g = random_pair(int(rng.integers(3, 9)), rng, demand_p=0.5)
            check = courant_fisher_check(g)
            assert check.holds, (check.lambda_1, check.phi_star)

    def test_single_demand_pair_effective_resistance(self, rng):
        # with one demand pair, lambda_1 = 1 / (d * effective resistance) and
        # Phi* = mincut / d; the check encodes 1/R_eff <= mincut
        n = 5
        g = random_pair(n, rng, demand_p=0.0)
        (a, b) = (0, n - 1)
        g = WeightedGraphPair(n, g.cost, {(a, b): 2.0})
        L = g.cost_laplacian()
        Lp = np.linalg.pinv(L)
        r_eff = Lp[a, a] + Lp[b, b] - 2 * Lp[a, b]
        from sparsecut import generalized_eigenvalues
        lam1 = generalized_eigenvalues(L, g.demand_laplacian())[0]
        assert lam1 == pytest.approx(1.0 / (2.0 * r_eff), rel=1e-8)
