"""Time-bin interferometer layouts: loop delays, angle schedules, circuits and unitaries.

A loop of delay ``d`` couples time bins ``i`` and ``i + d`` with one
beamsplitter event for every ``i`` in ``0 .. n_modes - d - 1``.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "TBIConfig",
    "build_circuit",
    "mode_unitary",
    "time_schedule",
]


@dataclass(frozen=True)
class TBIConfig:
    n_modes: int
    loop_delays: tuple[int, ...]
    angles: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        delays = tuple(int(d) for d in self.loop_delays)
        angles = tuple(tuple(float(t) for t in row) for row in self.angles)
        object.__setattr__(self, "loop_delays", delays)
        object.__setattr__(self, "angles", angles)
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        if len(angles) != len(delays):
            raise ValueError("need one angle list per loop")
        for d, row in zip(delays, angles):
            if not 0 < d < self.n_modes:
                raise ValueError(f"loop delay {d} must satisfy 0 < d < n_modes={self.n_modes}")
            if len(row) != self.n_modes - d:
                raise ValueError(
                    f"loop with delay {d} needs {self.n_modes - d} angles, got {len(row)}"
                )
            if not all(math.isfinite(t) for t in row):
                raise ValueError("angles must be finite")

    @classmethod
    def uniform(cls, n_modes: int, loop_delays: Sequence[int], theta: float = 0.0) -> "TBIConfig":
        """Every beamsplitter set to ``theta``."""
        return cls(n_modes, tuple(loop_delays), tuple((theta,) * (n_modes - d) for d in loop_delays))

    @classmethod
    def from_flat(cls, n_modes: int, loop_delays: Sequence[int], thetas) -> "TBIConfig":
        thetas = [float(t) for t in thetas]
        if len(thetas) != n_angles(n_modes, loop_delays):
            raise ValueError(
                f"expected {n_angles(n_modes, loop_delays)} angles, got {len(thetas)}"
            )
        rows, k = [], 0
        for d in loop_delays:
            rows.append(tuple(thetas[k:k + n_modes - d]))
            k += n_modes - d
        return cls(n_modes, tuple(loop_delays), tuple(rows))

    @property
    def n_angles(self) -> int:
        return n_angles(self.n_modes, self.loop_delays)

    def flat_angles(self) -> np.ndarray:
        return np.array([t for row in self.angles for t in row], dtype=float)

    def with_angles(self, thetas) -> "TBIConfig":
        return TBIConfig.from_flat(self.n_modes, self.loop_delays, thetas)

    def to_json(self) -> str:
        return json.dumps(
            {"n_modes": self.n_modes, "loop_delays": list(self.loop_delays),
             "angles": [list(row) for row in self.angles]}
        )

    @classmethod
    def from_json(cls, text: str) -> "TBIConfig":
        doc = json.loads(text)
        try:
            return cls(int(doc["n_modes"]), tuple(doc["loop_delays"]),
                       tuple(tuple(row) for row in doc["angles"]))
        except KeyError as exc:
            raise ValueError(f"TBI config missing key {exc}") from None


def n_angles(n_modes: int, loop_delays: Sequence[int]) -> int:
    return sum(n_modes - d for d in loop_delays)


def build_circuit(config: TBIConfig) -> list[tuple[int, int, float]]:
    """Beamsplitter events ``(mode_a, mode_b, theta)`` in loop order, ``i`` ascending."""
    return [
        (i, i + d, theta)
        for d, row in zip(config.loop_delays, config.angles)
        for i, theta in enumerate(row)
    ]


@lru_cache(maxsize=256)
def time_schedule(n_modes: int, loop_delays: tuple[int, ...]) -> tuple[int, ...]:
    """Reorder circuit events into arrival-time order.

    Returns a permutation of event indices (into ``build_circuit`` order) in
    which events sharing a mode keep their relative order, so the composed
    unitary is unchanged.  Among ready events the one whose later mode index
    is smallest goes first; this is when its second time bin reaches the
    beamsplitter, and it lets early bins retire before late bins enter.
    """
    events = [(i, i + d) for d in loop_delays for i in range(n_modes - d)]
    last_on_mode: dict[int, int] = {}
    preds: list[set[int]] = []
    for k, (a, b) in enumerate(events):
        deps = {last_on_mode[m] for m in (a, b) if m in last_on_mode}
        preds.append(deps)
        last_on_mode[a] = last_on_mode[b] = k
    succs: list[list[int]] = [[] for _ in events]
    indeg = [len(p) for p in preds]
    for k, deps in enumerate(preds):
        for j in deps:
            succs[j].append(k)

    ready = [(events[k][1], k) for k in range(len(events)) if indeg[k] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, k = heapq.heappop(ready)
        order.append(k)
        for s in succs[k]:
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(ready, (events[s][1], s))
    return tuple(order)


def rotation(n_modes: int, a: int, b: int, theta: float) -> np.ndarray:
    """Single beamsplitter as an ``n_modes`` square matrix, ``U[out, in]`` convention."""
    u = np.eye(n_modes, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    u[a, a] = c
    u[b, a] = s
    u[a, b] = -s
    u[b, b] = c
    return u


def mode_unitary(config: TBIConfig) -> np.ndarray:
    """Single-photon transfer matrix of the whole interferometer.

    ``U[j, i]`` is the amplitude for a photon entering mode ``i`` to leave in
    mode ``j``; a beamsplitter maps ``a_dag -> cos * a_dag + sin * b_dag``.
    """
    u = np.eye(config.n_modes, dtype=complex)
    for a, b, theta in build_circuit(config):
        c, s = math.cos(theta), math.sin(theta)
        row_a, row_b = u[a].copy(), u[b].copy()
        u[a] = c * row_a - s * row_b
        u[b] = s * row_a + c * row_b
    return u
