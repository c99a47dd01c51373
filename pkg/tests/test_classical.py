import pytest

from tbibench.classical import (
    brute_force_min_dominating_set,
    exact_min_dominating_set,
    greedy_dominating_set,
    independent_dominating_set,
)
from tbibench.errors import ResourceLimitError
from tbibench.graph import Graph, GnpSpec, generate_gnp, is_dominating_set


def test_brute_force_examples():
    assert brute_force_min_dominating_set(Graph.complete(5)) == (1, 0, 0, 0, 0)
    p4 = brute_force_min_dominating_set(Graph.path(4))
    assert sum(p4) == 2 and is_dominating_set(Graph.path(4), p4)
    assert p4 == (1, 0, 1, 0)  # smallest index tuple (0, 2) among size-2 sets
    assert brute_force_min_dominating_set(Graph.empty(3)) == (1, 1, 1)
    with pytest.raises(ResourceLimitError):
        brute_force_min_dominating_set(Graph.empty(21))


def test_p4_has_no_single_dominator():
    g = Graph.path(4)
    assert not any(is_dominating_set(g, [int(i == v) for i in range(4)]) for v in range(4))


@pytest.mark.parametrize("n", [1, 2, 7, 40])
def test_exact_complete_and_star(n):
    assert exact_min_dominating_set(Graph.complete(n)).size == 1
    r = exact_min_dominating_set(Graph.star(9))
    assert r.size == 1 and r.bits[0] == 1 and r.optimal


def test_exact_matches_brute_force_200(rng):
    for k in range(200):
        n = int(rng.integers(1, 15))
        g = generate_gnp(GnpSpec(n, [0.1, 0.3, 0.6][k % 3], k))
        r = exact_min_dominating_set(g)
        assert r.optimal
        assert is_dominating_set(g, r.bits)
        assert r.size == sum(brute_force_min_dominating_set(g))


def test_exact_node_budget_flags_nonoptimal():
    g = generate_gnp(GnpSpec(150, 0.05, 1))
    r = exact_min_dominating_set(g, node_budget=50)
    assert not r.optimal
    assert is_dominating_set(g, r.bits)
    assert r.size <= sum(greedy_dominating_set(g))


def test_exact_n100_sparse_is_practical():
    g = generate_gnp(GnpSpec(100, 0.05, 1))
    r = exact_min_dominating_set(g, node_budget=200_000)
    assert r.optimal and is_dominating_set(g, r.bits)


def test_greedy_examples():
    assert greedy_dominating_set(Graph.star(4)) == (1, 0, 0, 0, 0)
    assert greedy_dominating_set(Graph.empty(4)) == (1, 1, 1, 1)
    # vertex 1 first (covers 3, beats vertex 2 on index); then 2 and 3 tie at one, 2 wins
    assert greedy_dominating_set(Graph.path(4)) == (0, 1, 1, 0)


def test_greedy_matches_naive_rescan(rng):
    def naive(g):
        visited, chosen = set(), [0] * g.n
        while len(visited) < g.n:
            best = max(
                (v for v in range(g.n) if not chosen[v]),
                key=lambda v: (len({v, *g.adjacency[v]} - visited), -v),
            )
            chosen[best] = 1
            visited |= {best, *g.adjacency[best]}
        return tuple(chosen)

    for k in range(100):
        g = generate_gnp(GnpSpec(int(rng.integers(1, 40)), [0.05, 0.2, 0.5][k % 3], k))
        assert greedy_dominating_set(g) == naive(g)


def test_independent_examples():
    assert independent_dominating_set(Graph.complete(6)) == (1, 0, 0, 0, 0, 0)
    assert independent_dominating_set(Graph.path(4)) == (1, 0, 1, 0)
    assert independent_dominating_set(Graph.empty(5)) == (1,) * 5


def test_solvers_valid_and_ordered_1000(rng):
    for k in range(1000):
        n = int(rng.integers(1, 201))
        g = generate_gnp(GnpSpec(n, [0.05, 0.2, 0.5][k % 3], k))
        gr = greedy_dominating_set(g)
        ind = independent_dominating_set(g)
        assert is_dominating_set(g, gr)
        assert is_dominating_set(g, ind)
        chosen = [v for v in range(n) if ind[v]]
        assert not any(g.has_edge(u, v) for u in chosen for v in chosen if u < v)
        if n <= 40:
            ex = exact_min_dominating_set(g, node_budget=20_000)
            assert is_dominating_set(g, ex.bits)
            assert ex.size <= sum(gr) and ex.size <= sum(ind)
