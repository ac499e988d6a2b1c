import random
from itertools import combinations

import pytest

from domrecon import (ContractError, Graph, InputError, ResourceLimitError,
                      gamma_exact, gamma_lower_bound_regular,
                      greedy_dominating, path_graph, reduce_to_minimal,
                      upper_domination_exhaustive)
from domrecon.randgen import random_connected_graph

from oracles import brute_force_gamma, dominates


class TestGammaExact:
    def test_c5_matches_oracle(self, c5):
        expected, _ = brute_force_gamma(c5)
        assert expected == 2  # frozen from the enumeration oracle
        size, members = gamma_exact(c5)
        assert size == 2
        assert c5.is_dominating(members) and len(members) == 2

    def test_single_vertex(self):
        assert gamma_exact(Graph(1, [])) == (1, frozenset({0}))

    def test_empty_graph(self):
        assert gamma_exact(Graph(0, [])) == (0, frozenset())

    def test_torus_k4(self, torus4):
        # degree bound 80/5 = 16 is met by the canonical set, so 16 is optimal
        size, members = gamma_exact(torus4.graph, max_n=80)
        assert size == 16
        assert torus4.graph.is_dominating(members)

    def test_matches_oracle_on_randoms(self):
        rng = random.Random(11)
        for _ in range(25):
            g = random_connected_graph(rng, n_min=2, n_max=12)
            expected, _ = brute_force_gamma(g)
            size, members = gamma_exact(g)
            assert size == expected
            assert g.is_dominating(members)

    def test_size_guard(self, torus4):
        with pytest.raises(InputError, match="guarded"):
            gamma_exact(torus4.graph)

    def test_budget_carries_incumbent(self, torus4):
        with pytest.raises(ResourceLimitError) as err:
            gamma_exact(torus4.graph, max_n=80, budget=50)
        assert torus4.graph.is_dominating(err.value.info["incumbent"])
        assert err.value.info["incumbent_size"] >= 16


class TestLowerBound:
    def test_torus_k8(self, torus8):
        assert gamma_lower_bound_regular(torus8.graph) == 64

    def test_formula_examples(self, c5):
        assert gamma_lower_bound_regular(c5) == 2
        assert gamma_lower_bound_regular(path_graph(3)) == 1

    def test_never_exceeds_exact(self):
        rng = random.Random(3)
        for _ in range(20):
            g = random_connected_graph(rng, n_min=2, n_max=10)
            assert gamma_lower_bound_regular(g) <= gamma_exact(g)[0]


class TestGreedy:
    def test_isolated_vertices_self_dominate(self):
        g = Graph(3, [])
        assert greedy_dominating(g) == {0, 1, 2}

    def test_c5_size(self, c5):
        d = greedy_dominating(c5)
        assert c5.is_dominating(d) and len(d) <= 3

    def test_torus_dominating_and_bounded(self, torus4):
        d = greedy_dominating(torus4.graph)
        assert torus4.graph.is_dominating(d)
        assert len(d) >= 16

    def test_deterministic(self, c5):
        assert greedy_dominating(c5) == greedy_dominating(c5)

    def test_priority_policy(self, c5):
        preferred = greedy_dominating(c5, priority=[4, 3, 2, 1, 0])
        assert c5.is_dominating(preferred)
        with pytest.raises(InputError):
            greedy_dominating(c5, priority=[0, 0, 1, 2, 3])


class TestReduceToMinimal:
    def test_c5_full_set(self, c5):
        d = reduce_to_minimal(c5, range(5))
        assert c5.is_dominating(d) and len(d) == 2

    def test_minimal_input_is_fixpoint(self, c5):
        assert reduce_to_minimal(c5, {0, 2}) == {0, 2}

    def test_torus_canonical_unchanged(self, torus4):
        assert reduce_to_minimal(torus4.graph, torus4.d_box) == torus4.d_box

    def test_requires_dominating_input(self, c5):
        with pytest.raises(ContractError):
            reduce_to_minimal(c5, {0})

    def test_output_minimal_on_randoms(self):
        rng = random.Random(5)
        for _ in range(25):
            g = random_connected_graph(rng, n_min=2, n_max=10)
            d = reduce_to_minimal(g, range(g.n))
            assert g.is_dominating(d)
            for v in d:
                assert not g.is_dominating(d - {v})


class TestUpperDomination:
    def _oracle(self, g):
        best = 0
        for size in range(1, g.n + 1):
            for combo in combinations(range(g.n), size):
                if dominates(g, combo) and all(
                        not dominates(g, set(combo) - {v}) for v in combo):
                    best = max(best, size)
        return best

    def test_matches_direct_enumeration(self, c5):
        assert upper_domination_exhaustive(c5) == self._oracle(c5)

    def test_path(self):
        g = path_graph(6)
        assert upper_domination_exhaustive(g) == self._oracle(g)

    def test_guard(self, torus4):
        with pytest.raises(InputError):
            upper_domination_exhaustive(torus4.graph)
