"""Penalty-augmented dominating-set energy.

``F(x) = sum_i (x_i + A * P_i)`` where ``P_i`` is 1 when vertex ``i`` is not
dominated by ``x``.  In the total-dominating variant a vertex cannot dominate
itself, so only its neighbours count.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .graph import Graph, as_bits

__all__ = ["CostParams", "Variant", "energy", "energy_batch", "penalty"]


class Variant(str, enum.Enum):
    SELF_DOMINATING = "self-dominating"
    TOTAL_DOMINATING = "total-dominating"


@dataclass(frozen=True)
class CostParams:
    A: int = 2
    variant: Variant = Variant.SELF_DOMINATING

    def __post_init__(self):
        if self.A < 0:
            raise ValueError("penalty scale A must be non-negative")
        object.__setattr__(self, "variant", Variant(self.variant))


def penalty(g: Graph, x, i: int, params: CostParams = CostParams()) -> int:
    bits = as_bits(x, g.n)
    if not 0 <= i < g.n:
        raise ValueError(f"vertex {i} out of range for n={g.n}")
    covered = sum(bits[j] for j in g.adjacency[i])
    if params.variant is Variant.SELF_DOMINATING:
        covered += bits[i]
    return 0 if covered - 1 >= 0 else 1


def energy(g: Graph, x, params: CostParams = CostParams()) -> int:
    bits = as_bits(x, g.n)
    return sum(bits) + params.A * sum(penalty(g, bits, i, params) for i in range(g.n))


def energy_batch(g: Graph, X: np.ndarray, params: CostParams = CostParams()) -> np.ndarray:
    """Energies of each row of a ``(samples, n)`` 0/1 array, as ``int64``."""
    X = np.asarray(X, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != g.n:
        raise ValueError(f"expected shape (samples, {g.n}), got {X.shape}")
    closed = params.variant is Variant.SELF_DOMINATING
    key = "_closed_adj" if closed else "_open_adj"
    adj = g.__dict__.get(key)
    if adj is None:
        adj = g.adjacency_matrix(closed=closed)
        object.__setattr__(g, key, adj)
    undominated = (X @ adj) == 0
    return X.sum(axis=1) + params.A * undominated.sum(axis=1)
