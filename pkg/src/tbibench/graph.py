"""Undirected simple graphs, reproducible G(n, p) generation and domination checks.

Vertices are the integers ``0 .. n-1``; bit ``i`` of a candidate bitstring
refers to vertex ``i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GnpSpec",
    "GraphFormatError",
    "SplitMix64",
    "as_bits",
    "generate_gnp",
    "is_dominating_set",
    "load_graph",
    "save_graph",
]

_MASK64 = (1 << 64) - 1


class GraphFormatError(ValueError):
    """Raised when edge-list text cannot be parsed."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph stored as sorted neighbour tuples."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency must have one entry per vertex")
        for i, nbrs in enumerate(self.adjacency):
            prev = -1
            for j in nbrs:
                if not 0 <= j < self.n:
                    raise ValueError(f"neighbour {j} of {i} out of range")
                if j == i:
                    raise ValueError(f"self-loop at vertex {i}")
                if j <= prev:
                    raise ValueError(f"neighbours of {i} not strictly increasing")
                prev = j
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i not in self._neighbour_set(j):
                    raise ValueError(f"edge ({i}, {j}) is not symmetric")

    def _neighbour_set(self, i: int) -> frozenset[int]:
        cache = self.__dict__.setdefault("_nbr_sets", {})
        if i not in cache:
            cache[i] = frozenset(self.adjacency[i])
        return cache[i]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(tuple(j for j in range(n) if j != i) for i in range(n)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(() for _ in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        """Star K_{1,leaves} with centre vertex 0."""
        return cls.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbour_set(u)

    def closed_masks(self) -> tuple[int, ...]:
        """Closed neighbourhoods ``N[i]`` as integer bitmasks (bit j set for j in N[i])."""
        cache = self.__dict__.get("_closed_masks")
        if cache is None:
            cache = tuple(
                (1 << i) | sum(1 << j for j in nbrs) for i, nbrs in enumerate(self.adjacency)
            )
            object.__setattr__(self, "_closed_masks", cache)
        return cache

    def adjacency_matrix(self, closed: bool = False) -> np.ndarray:
        """Dense 0/1 ``int64`` adjacency matrix, with ones on the diagonal if ``closed``."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        if closed:
            np.fill_diagonal(a, 1)
        return a

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``i`` renamed to ``perm[i]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    # frozen dataclass equality would compare the private caches too
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self):
        return hash((self.n, self.adjacency))


@dataclass(frozen=True)
class GnpSpec:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


class SplitMix64:
    """splitmix64 generator; the seed is the initial state."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) built from the high 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def generate_gnp(spec: GnpSpec) -> Graph:
    """Sample G(n, p) by geometric skip-sampling over the lower triangle.

    Candidate pairs ``(v, w)`` with ``w < v`` are visited in row-major order;
    the gap to the next included pair is ``floor(log(1-u) / log(1-p))``.
    """
    n, p = spec.n, spec.p
    if p <= 0.0:
        return Graph.empty(n)
    if p >= 1.0:
        return Graph.complete(n)

    rng = SplitMix64(spec.seed)
    lp = math.log1p(-p)
    edges = []
    v, w = 1, -1
    n_pairs = n * (n - 1) // 2
    while v < n:
        skip = math.log1p(-rng.random()) / lp
        if skip >= n_pairs:  # jumps past the last pair; also guards inf for tiny p
            break
        w += 1 + int(skip)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return Graph.from_edges(n, edges)


def as_bits(x, n: int | None = None) -> tuple[int, ...]:
    """Normalise a bitstring given as str, sequence or array to a tuple of 0/1 ints."""
    if isinstance(x, str):
        if set(x) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {x!r}")
        bits = tuple(int(c) for c in x)
    else:
        bits = tuple(int(b) for b in x)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bitstring entries must be 0 or 1")
    if n is not None and len(bits) != n:
        raise ValueError(f"bitstring has length {len(bits)}, expected {n}")
    return bits


def bits_to_str(x) -> str:
    return "".join(str(int(b)) for b in x)


def is_dominating_set(g: Graph, x) -> bool:
    """True iff every vertex is selected or has a selected neighbour."""
    bits = as_bits(x, g.n)
    return all(
        bits[i] or any(bits[j] for j in g.adjacency[i]) for i in range(g.n)
    )


def save_graph(g: Graph) -> str:
    edges = list(g.edges())
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` lines of ``u v`` edge-list format.

    Edges may be listed in either orientation and in any order; ``save_graph``
    writes the canonical form (``u < v``, lexicographic order).
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise GraphFormatError(1, "missing 'n m' header")
    n, m = _parse_pair(lines[0], 1)
    if n < 0 or m < 0:
        raise GraphFormatError(1, "negative count in header")
    body = lines[1:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != m:
        raise GraphFormatError(len(lines), f"header declares {m} edges, found {len(body)}")
    seen = set()
    for k, line in enumerate(body, start=2):
        u, v = _parse_pair(line, k)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(k, f"vertex index out of range for n={n}")
        if u == v:
            raise GraphFormatError(k, f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(k, f"duplicate edge {key}")
        seen.add(key)
    return Graph.from_edges(n, seen)


def _parse_pair(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(lineno, f"expected two integers, got {line!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(lineno, f"expected two integers, got {line!r}") from None
