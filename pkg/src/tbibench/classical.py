"""Classical minimum dominating set solvers: brute force, exact branch-and-bound,
degree greedy and a linear-time independent dominating set."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import combinations

from .errors import ResourceLimitError
from .graph import Graph

__all__ = [
    "ExactResult",
    "brute_force_min_dominating_set",
    "exact_min_dominating_set",
    "greedy_dominating_set",
    "independent_dominating_set",
]

MAX_BRUTE_FORCE_N = 20


def _to_bits(n: int, chosen) -> tuple[int, ...]:
    bits = [0] * n
    for v in chosen:
        bits[v] = 1
    return tuple(bits)


def brute_force_min_dominating_set(g: Graph) -> tuple[int, ...]:
    """Exhaustive search by increasing size.

    Within a size, candidate vertex tuples are tried in lexicographic order,
    so the first hit has the smallest sorted index tuple.
    """
    if g.n > MAX_BRUTE_FORCE_N:
        raise ResourceLimitError(f"brute force limited to n <= {MAX_BRUTE_FORCE_N}")
    if g.n == 0:
        return ()
    masks = g.closed_masks()
    full = (1 << g.n) - 1
    for k in range(1, g.n + 1):
        for combo in combinations(range(g.n), k):
            cover = 0
            for v in combo:
                cover |= masks[v]
            if cover == full:
                return _to_bits(g.n, combo)
    raise AssertionError("unreachable: the full vertex set dominates")


def greedy_dominating_set(g: Graph) -> tuple[int, ...]:
    """Repeatedly take the vertex whose closed neighbourhood covers the most
    unvisited vertices; ties go to the lowest index.

    Coverage only shrinks, so heap keys are upper bounds and stale entries are
    re-pushed with their fresh count when popped.
    """
    n = g.n
    visited = [False] * n
    chosen = [False] * n
    heap = [(-(g.degree(v) + 1), v) for v in range(n)]
    heapq.heapify(heap)
    remaining = n
    while remaining:
        neg, v = heapq.heappop(heap)
        if chosen[v]:
            continue
        cov = (not visited[v]) + sum(1 for u in g.adjacency[v] if not visited[u])
        if cov != -neg:
            heapq.heappush(heap, (-cov, v))
            continue
        chosen[v] = True
        for u in (v, *g.adjacency[v]):
            if not visited[u]:
                visited[u] = True
                remaining -= 1
    return tuple(int(c) for c in chosen)


def independent_dominating_set(g: Graph) -> tuple[int, ...]:
    """Single pass: the lowest-index undominated vertex joins, dominating itself and
    its neighbours.  The result is a maximal independent set; ``O(V + E)``."""
    dominated = [False] * g.n
    bits = [0] * g.n
    for v in range(g.n):
        if dominated[v]:
            continue
        bits[v] = 1
        dominated[v] = True
        for u in g.adjacency[v]:
            dominated[u] = True
    return tuple(bits)


@dataclass(frozen=True)
class ExactResult:
    bits: tuple[int, ...]
    optimal: bool
    nodes: int

    @property
    def size(self) -> int:
        return sum(self.bits)


def exact_min_dominating_set(g: Graph, node_budget: int | None = None) -> ExactResult:
    """Branch-and-bound on the covering model ``min sum x  s.t.  x_i + sum_{j in N(i)} x_j >= 1``.

    Branching picks the undominated vertex with the fewest remaining
    candidate dominators and tries each candidate in turn, forbidding earlier
    candidates in later branches.  The bound is ``ceil(u / c)`` with ``u``
    undominated vertices and ``c`` the best residual coverage of any allowed
    vertex (at most ``max_degree + 1``), tightened by the fractional bound
    ``sum_w 1 / max_{v in N[w]} cov(v)``.  Candidates whose residual coverage
    is contained in another candidate's are discarded at each node.  The
    greedy set seeds the incumbent.

    If ``node_budget`` search nodes are exhausted the incumbent is returned
    with ``optimal=False``.
    """
    n = g.n
    if n == 0:
        return ExactResult((), True, 0)
    masks = g.closed_masks()
    closed = [(v, *g.adjacency[v]) for v in range(n)]
    full = (1 << n) - 1
    greedy = greedy_dominating_set(g)
    best = [v for v in range(n) if greedy[v]]
    best_size = [len(best)]
    nodes = [0]
    out_of_budget = [False]

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def search(undominated: int, allowed: int, chosen: list[int]):
        if out_of_budget[0]:
            return
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            out_of_budget[0] = True
            return
        if not undominated:
            if len(chosen) < best_size[0]:
                best[:] = chosen
                best_size[0] = len(chosen)
            return
        slack = best_size[0] - len(chosen)
        if slack <= 1:
            # only a single vertex covering everything can still improve
            if slack == 1:
                rest = allowed
                while rest:
                    low = rest & -rest
                    v = low.bit_length() - 1
                    rest ^= low
                    if undominated & ~masks[v] == 0:
                        best[:] = chosen + [v]
                        best_size[0] = len(chosen) + 1
                        return
            return

        cov = {}
        cover_sets = {}
        rest = allowed
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            cs = masks[v] & undominated
            if cs:
                cover_sets[v] = cs
                cov[v] = popcount(cs)
            else:
                allowed &= ~low
        if not cov:
            return
        # dominance: drop v when another allowed u covers a superset of what v covers;
        # such a u must dominate the lowest vertex w that v covers
        for v, cs in cover_sets.items():
            w = (cs & -cs).bit_length() - 1
            for u in closed[w]:
                if u != v and u in cov and cs & ~cover_sets[u] == 0 and (
                    cov[u] > cov[v] or u < v
                ):
                    del cov[v]
                    allowed &= ~(1 << v)
                    break
        u_count = popcount(undominated)
        if len(chosen) + -(-u_count // max(cov.values())) >= best_size[0]:
            return
        # fractional bound: each undominated w costs at least 1 / (best coverage among its dominators)
        frac = 0.0
        rest = undominated
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            best_c = max((cov.get(v, 0) for v in closed[w]), default=0)
            if best_c == 0:
                return  # w can no longer be dominated in this branch
            frac += 1.0 / best_c
        if len(chosen) + math.ceil(frac - 1e-9) >= best_size[0]:
            return

        pick_cands = None
        rest = undominated
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            cands = masks[w] & allowed
            if not cands:
                return  # w can no longer be dominated in this branch
            k = popcount(cands)
            if pick_cands is None or k < popcount(pick_cands):
                pick_cands = cands
                if k == 1:
                    break

        order = []
        rest = pick_cands
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            order.append((-popcount(masks[v] & undominated), v))
        order.sort()
        for _, v in order:
            chosen.append(v)
            search(undominated & ~masks[v], allowed & ~(1 << v), chosen)
            chosen.pop()
            allowed &= ~(1 << v)
            if out_of_budget[0]:
                return

    search(full, full, [])
    return ExactResult(_to_bits(n, best), not out_of_budget[0], nodes[0])
