"""Exact Fock-space simulation of lossless beamsplitter networks.

States are sparse maps from occupation tuples to complex amplitudes.  A
beamsplitter of angle ``theta`` on modes ``(a, b)`` maps creation operators
``a_dag -> cos(theta) a_dag + sin(theta) b_dag`` and
``b_dag -> -sin(theta) a_dag + cos(theta) b_dag``.
"""
from __future__ import annotations

import math
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .errors import ResourceLimitError, SamplingError
from .tbi import TBIConfig, build_circuit, time_schedule

__all__ = [
    "FockState",
    "SequentialSampler",
    "alternating_input",
    "beamsplitter_apply",
    "exact_distribution",
    "sample",
    "threshold_map",
]

PRUNE = 1e-14
MAX_EXACT_PHOTONS = 8


class FockState:
    """Immutable normalised superposition of occupation vectors."""

    __slots__ = ("_amps", "n_modes")

    def __init__(self, amplitudes: Mapping[tuple[int, ...], complex], n_modes: int | None = None):
        amps = {tuple(int(c) for c in k): complex(v) for k, v in amplitudes.items()}
        if not amps:
            raise ValueError("a Fock state needs at least one basis vector")
        sizes = {len(k) for k in amps}
        if len(sizes) != 1:
            raise ValueError("all occupation vectors must have the same length")
        self.n_modes = sizes.pop() if n_modes is None else n_modes
        self._amps = amps

    @classmethod
    def basis(cls, occupation: Sequence[int]) -> "FockState":
        occ = tuple(int(c) for c in occupation)
        if any(c < 0 for c in occ):
            raise ValueError("occupation numbers must be non-negative")
        return cls({occ: 1.0})

    @property
    def amplitudes(self) -> Mapping[tuple[int, ...], complex]:
        return MappingProxyType(self._amps)

    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in self._amps.values())

    def photon_numbers(self) -> set[int]:
        return {sum(k) for k in self._amps}

    def probabilities(self) -> dict[tuple[int, ...], float]:
        return {k: abs(a) ** 2 for k, a in self._amps.items()}

    def __repr__(self):
        terms = " + ".join(f"({a:.4g})|{','.join(map(str, k))}>" for k, a in self._amps.items())
        return f"FockState({terms})"


@lru_cache(maxsize=8192)
def _bs_columns(theta: float, total: int) -> tuple[tuple[tuple[int, float], ...], ...]:
    """Two-mode transfer coefficients for ``total`` photons in the pair.

    Entry ``[na]`` lists ``(m, coeff)`` where ``coeff = <m, total-m| BS |na, total-na>``.
    Obtained by expanding ``(c a + s b)^na (-s a + c b)^nb`` binomially and
    normalising with ``sqrt(m! (total-m)! / (na! nb!))``.
    """
    c, s = math.cos(theta), math.sin(theta)
    fact = [math.factorial(k) for k in range(total + 1)]
    cols = []
    for na in range(total + 1):
        nb = total - na
        out = [0.0] * (total + 1)
        inv_norm = 1.0 / math.sqrt(fact[na] * fact[nb])
        for k in range(na + 1):
            ck = math.comb(na, k) * c ** k * s ** (na - k)
            if ck == 0.0:
                continue
            for l in range(nb + 1):
                cl = math.comb(nb, l) * (-s) ** l * c ** (nb - l)
                out[k + l] += ck * cl
        cols.append(tuple(
            (m, v * math.sqrt(fact[m] * fact[total - m]) * inv_norm)
            for m, v in enumerate(out)
            if abs(v) > 0.0
        ))
    return tuple(cols)


def _apply_pair(amps: dict, pa: int, pb: int, theta: float) -> dict:
    """Apply a beamsplitter to positions ``pa``, ``pb`` of every key; prune and renormalise."""
    out: dict = {}
    get = out.get
    for key, amp in amps.items():
        na, nb = key[pa], key[pb]
        total = na + nb
        if total == 0:
            out[key] = get(key, 0.0) + amp
            continue
        lst = list(key)
        for m, coeff in _bs_columns(theta, total)[na]:
            lst[pa] = m
            lst[pb] = total - m
            k2 = tuple(lst)
            out[k2] = get(k2, 0.0) + amp * coeff
    return _prune(out)


def _prune(amps: dict) -> dict:
    kept = {k: a for k, a in amps.items() if abs(a) >= PRUNE}
    norm = math.sqrt(sum(abs(a) ** 2 for a in kept.values()))
    if norm == 0.0:
        raise SamplingError("state vanished after pruning")
    if abs(norm - 1.0) > 1e-15:
        kept = {k: a / norm for k, a in kept.items()}
    return kept


def beamsplitter_apply(state: FockState, mode_a: int, mode_b: int, theta: float) -> FockState:
    M = state.n_modes
    if mode_a == mode_b:
        raise ValueError("beamsplitter needs two distinct modes")
    if not (0 <= mode_a < M and 0 <= mode_b < M):
        raise ValueError(f"modes ({mode_a}, {mode_b}) out of range for {M} modes")
    return FockState(_apply_pair(state._amps, mode_a, mode_b, float(theta)), M)


def _check_input(config: TBIConfig, occupation) -> tuple[int, ...]:
    occ = tuple(int(c) for c in occupation)
    if len(occ) != config.n_modes:
        raise ValueError(f"input has {len(occ)} modes, config has {config.n_modes}")
    if any(c < 0 for c in occ):
        raise ValueError("occupation numbers must be non-negative")
    return occ


def evolve(config: TBIConfig, occupation, max_photons: int = MAX_EXACT_PHOTONS) -> FockState:
    """Full output state of the interferometer for a basis input."""
    occ = _check_input(config, occupation)
    if sum(occ) > max_photons:
        raise ResourceLimitError(
            f"{sum(occ)} photons exceeds the exact-simulation cap of {max_photons}"
        )
    amps = {occ: 1.0 + 0j}
    for a, b, theta in build_circuit(config):
        amps = _apply_pair(amps, a, b, theta)
    return FockState(amps, config.n_modes)


def exact_distribution(
    config: TBIConfig, occupation, max_photons: int = MAX_EXACT_PHOTONS
) -> dict[tuple[int, ...], float]:
    """Output probabilities over occupation vectors (zero-probability outcomes omitted)."""
    return evolve(config, occupation, max_photons).probabilities()


def threshold_map(outcome) -> tuple[int, ...]:
    return tuple(1 if c >= 1 else 0 for c in outcome)


def alternating_input(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("need at least one mode")
    return tuple(1 - (i % 2) for i in range(n))


@lru_cache(maxsize=256)
def _plan(n_modes: int, loop_delays: tuple[int, ...]):
    """Precompute, per time-ordered event, which modes join and which retire afterwards."""
    events = [(i, i + d) for d in loop_delays for i in range(n_modes - d)]
    order = time_schedule(n_modes, loop_delays)
    last_use = {}
    for step, k in enumerate(order):
        a, b = events[k]
        last_use[a] = last_use[b] = step
    seen = set()
    steps = []
    for step, k in enumerate(order):
        a, b = events[k]
        enter = tuple(m for m in (a, b) if m not in seen)
        seen.update(enter)
        retire = tuple(sorted(m for m in (a, b) if last_use[m] == step))
        steps.append((k, a, b, enter, retire))
    return tuple(steps), len(seen)


def _collapse(amps: dict, pos: int, count: int) -> dict:
    """Project position ``pos`` onto ``count`` photons, drop it from the keys, renormalise."""
    kept = {}
    for key, amp in amps.items():
        if key[pos] == count:
            k2 = key[:pos] + key[pos + 1:]
            kept[k2] = kept.get(k2, 0.0) + amp
    norm = math.sqrt(sum(abs(a) ** 2 for a in kept.values()))
    if norm == 0.0:
        raise SamplingError(f"collapse onto zero-probability outcome {count} at position {pos}")
    return {k: a / norm for k, a in kept.items()}


class SequentialSampler:
    """Draws exact samples by measuring each time bin as soon as it leaves the circuit.

    Events are applied in arrival-time order; a bin enters the live state at
    its first event and is measured right after its last one.  Bins no event
    touches are copied from the input.  The live state therefore only holds
    bins that are currently inside a loop.
    """

    def __init__(self, config: TBIConfig):
        self.config = config
        self._steps, self._n_measured = _plan(config.n_modes, config.loop_delays)
        thetas = [t for row in config.angles for t in row]
        self._thetas = [thetas[k] for k, *_ in self._steps]
        self.peak_live_modes = 0

    def draw(self, occupation, rng: np.random.Generator) -> tuple[int, ...]:
        occ = _check_input(self.config, occupation)
        return self._draw(occ, rng.random(self._n_measured).tolist())

    def draw_many(self, occupation, size: int, rng: np.random.Generator) -> np.ndarray:
        occ = _check_input(self.config, occupation)
        u = rng.random((size, self._n_measured)).tolist()
        return np.array([self._draw(occ, row) for row in u], dtype=np.int64).reshape(
            size, self.config.n_modes
        )

    def _draw(self, occ: tuple[int, ...], uniforms: list[float]) -> tuple[int, ...]:
        result = list(occ)
        live: list[int] = []
        amps: dict = {(): 1.0 + 0j}
        peak = self.peak_live_modes
        u_iter = iter(uniforms)
        for (k, a, b, enter, retire), theta in zip(self._steps, self._thetas):
            for m in enter:
                live.append(m)
                c = occ[m]
                amps = {key + (c,): amp for key, amp in amps.items()}
            if len(live) > peak:
                peak = len(live)
            amps = _apply_pair(amps, live.index(a), live.index(b), theta)
            for m in retire:
                pos = live.index(m)
                count = _measure(amps, pos, next(u_iter))
                amps = _collapse(amps, pos, count)
                live.pop(pos)
                result[m] = count
        self.peak_live_modes = peak
        return tuple(result)


def _measure(amps: dict, pos: int, u: float) -> int:
    marginal: dict[int, float] = {}
    for key, amp in amps.items():
        c = key[pos]
        marginal[c] = marginal.get(c, 0.0) + abs(amp) ** 2
    counts = sorted(marginal)
    target = u * sum(marginal.values())
    acc = 0.0
    for c in counts:
        acc += marginal[c]
        if target < acc:
            return c
    # float round-off at the top end: last outcome with non-zero weight
    return next(c for c in reversed(counts) if marginal[c] > 0.0)


def sample(config: TBIConfig, occupation, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw one output occupation vector."""
    return SequentialSampler(config).draw(occupation, rng)
