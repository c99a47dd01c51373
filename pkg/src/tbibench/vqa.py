"""Variational training loop: interferometer samples -> threshold bits -> random
bit flips -> energy, with SPSA updates of the angles and flip probabilities."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cost import CostParams, energy, energy_batch
from .errors import TrainingAborted
from .fock import SequentialSampler, alternating_input
from .graph import Graph, bits_to_str, is_dominating_set
from .tbi import TBIConfig

__all__ = [
    "IterationRecord",
    "SPSASchedule",
    "TrainingLog",
    "VQAParams",
    "VQAResult",
    "bit_flip",
    "detect_convergence",
    "evaluate_objective",
    "spsa_step",
    "train",
]


@dataclass(frozen=True)
class SPSASchedule:
    """Gains ``a_k = a / (k + 1 + stability)**alpha`` and ``c_k = c / (k + 1)**gamma``."""

    a: float = 0.1
    c: float = 0.1
    alpha: float = 0.602
    gamma: float = 0.101
    stability: float = 10.0

    def a_k(self, k: int) -> float:
        return self.a / (k + 1 + self.stability) ** self.alpha

    def c_k(self, k: int) -> float:
        return self.c / (k + 1) ** self.gamma


def spsa_step(
    objective: Callable[[np.ndarray], float],
    x: np.ndarray,
    k: int,
    rng: np.random.Generator,
    schedule: SPSASchedule = SPSASchedule(),
    project: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """One SPSA update using exactly two objective evaluations."""
    if k < 0:
        raise ValueError("iteration index must be >= 0")
    x = np.asarray(x, dtype=float)
    delta = rng.choice((-1.0, 1.0), size=x.shape)
    ck = schedule.c_k(k)
    f_plus = objective(x + ck * delta)
    f_minus = objective(x - ck * delta)
    if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
        raise TrainingAborted(
            f"non-finite objective at iteration {k}: f+={f_plus!r}, f-={f_minus!r}"
        )
    grad = (f_plus - f_minus) / (2.0 * ck * delta)
    x_new = x - schedule.a_k(k) * grad
    return project(x_new) if project is not None else x_new


def bit_flip(x, flip_probs, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with its own probability."""
    x = np.asarray(x, dtype=np.int64)
    p = np.asarray(flip_probs, dtype=float)
    if x.shape[-1] != p.shape[-1]:
        raise ValueError(f"bitstring length {x.shape[-1]} != {p.shape[-1]} flip probabilities")
    return x ^ (rng.random(x.shape) < p)


@dataclass
class VQAParams:
    thetas: np.ndarray
    flip_probs: np.ndarray
    learning_rate: float = 0.1
    max_iter: int = 250
    max_samp: int = 100
    spsa: SPSASchedule = field(default_factory=SPSASchedule)

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.flip_probs = np.clip(np.asarray(self.flip_probs, dtype=float), 0.0, 1.0)
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.max_samp < 1:
            raise ValueError("max_samp must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")

    @classmethod
    def initial(cls, config: TBIConfig, rng: np.random.Generator, **kwargs) -> "VQAParams":
        """Angles uniform in ``[0, pi)``, flip probabilities uniform in ``[0, 0.5)``."""
        thetas = rng.uniform(0.0, math.pi, config.n_angles)
        flips = rng.uniform(0.0, 0.5, config.n_modes)
        return cls(thetas, flips, **kwargs)

    def schedule(self) -> SPSASchedule:
        s = self.spsa
        return SPSASchedule(self.learning_rate, s.c, s.alpha, s.gamma, s.stability)

    def vector(self) -> np.ndarray:
        return np.concatenate([self.thetas, self.flip_probs])


@dataclass(frozen=True)
class IterationRecord:
    iter: int
    mean_energy: float
    min_energy: int
    best: str
    t_ns: int

    def to_json(self) -> str:
        return json.dumps(
            {"iter": self.iter, "mean_energy": self.mean_energy,
             "min_energy": self.min_energy, "best": self.best, "t_ns": self.t_ns}
        )


@dataclass
class TrainingLog:
    records: list[IterationRecord] = field(default_factory=list)

    def append(self, rec: IterationRecord) -> None:
        if self.records and rec.min_energy > self.records[-1].min_energy:
            raise ValueError("running minimum must not increase")
        self.records.append(rec)

    @property
    def running_min(self) -> list[int]:
        return [r.min_energy for r in self.records]

    @property
    def mean_energies(self) -> list[float]:
        return [r.mean_energy for r in self.records]

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def __len__(self):
        return len(self.records)


@dataclass
class VQAResult:
    best_bitstring: tuple[int, ...]
    min_energy: int
    log: TrainingLog
    converged_at: int | None
    is_dominating: bool
    n_evaluations: int
    total_time_ns: int
    final_params: VQAParams

    @property
    def iterations(self) -> int:
        return len(self.log)


def detect_convergence(trace, window: int = 50) -> int | None:
    """Earliest iteration ``t`` whose running minimum equals the one at ``t - window``.

    ``trace`` is a ``TrainingLog`` or a sequence of running-minimum values.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    values = trace.running_min if isinstance(trace, TrainingLog) else list(trace)
    for t in range(window, len(values)):
        if values[t] >= values[t - window]:
            return t
    return None


def _draw_candidates(sampler, occupation, flip_probs, max_samp, rng) -> np.ndarray:
    outcomes = sampler.draw_many(occupation, max_samp, rng)
    return bit_flip((outcomes >= 1).astype(np.int64), flip_probs, rng)


def evaluate_objective(
    g: Graph,
    params: VQAParams,
    tbi_config: TBIConfig,
    rng: np.random.Generator,
    cost: CostParams = CostParams(),
) -> tuple[float, tuple[tuple[int, ...], int]]:
    """Mean energy of ``max_samp`` candidates and the first lowest-energy candidate."""
    if tbi_config.n_modes != g.n:
        raise ValueError("interferometer must have one mode per vertex")
    sampler = SequentialSampler(tbi_config.with_angles(params.thetas))
    X = _draw_candidates(sampler, alternating_input(g.n), params.flip_probs, params.max_samp, rng)
    energies = energy_batch(g, X, cost)
    i = int(np.argmin(energies))
    return float(energies.mean()), (tuple(int(b) for b in X[i]), int(energies[i]))


def train(
    g: Graph,
    cost: CostParams,
    tbi_config: TBIConfig,
    params: VQAParams,
    rng: np.random.Generator,
    *,
    early_stop: bool = False,
    window: int = 50,
    on_evaluate: Callable[[np.ndarray, float], None] | None = None,
) -> VQAResult:
    """Run the sample / flip / score / SPSA loop for ``params.max_iter`` iterations.

    Each iteration evaluates the objective twice (at the two SPSA
    perturbations), logs the mean energy over both batches, and keeps the
    lowest-energy candidate seen so far; ties keep the earliest.
    """
    if tbi_config.n_modes != g.n:
        raise ValueError("interferometer must have one mode per vertex")
    n_theta = tbi_config.n_angles
    if params.thetas.shape != (n_theta,) or params.flip_probs.shape != (g.n,):
        raise ValueError("parameter shapes do not match the graph and interferometer")
    occupation = alternating_input(g.n)
    schedule = params.schedule()
    samp = params.max_samp

    best_bits: tuple[int, ...] | None = None
    best_e = None
    batch_energies: list[np.ndarray] = []
    n_evals = 0

    def objective(vec: np.ndarray) -> float:
        nonlocal best_bits, best_e, n_evals
        n_evals += 1
        sampler = SequentialSampler(tbi_config.with_angles(vec[:n_theta]))
        X = _draw_candidates(sampler, occupation, vec[n_theta:], samp, rng)
        energies = energy_batch(g, X, cost)
        i = int(np.argmin(energies))
        if best_e is None or energies[i] < best_e:
            best_e = int(energies[i])
            best_bits = tuple(int(b) for b in X[i])
        batch_energies.append(energies)
        value = float(energies.mean())
        if on_evaluate is not None:
            on_evaluate(vec, value)
        return value

    def project(vec: np.ndarray) -> np.ndarray:
        vec = vec.copy()
        vec[n_theta:] = np.clip(vec[n_theta:], 0.0, 1.0)
        return vec

    vec = params.vector()
    log = TrainingLog()
    converged_at = None
    start = time.monotonic_ns()
    for k in range(params.max_iter):
        batch_energies.clear()
        vec = spsa_step(objective, vec, k, rng, schedule, project)
        mean = float(np.concatenate(batch_energies).mean())
        log.append(IterationRecord(k, mean, best_e, bits_to_str(best_bits),
                                   time.monotonic_ns() - start))
        if early_stop and converged_at is None:
            converged_at = detect_convergence(log, window)
            if converged_at is not None:
                break
    total = time.monotonic_ns() - start
    if converged_at is None:
        converged_at = detect_convergence(log, window)

    final = VQAParams(vec[:n_theta], vec[n_theta:], params.learning_rate,
                      params.max_iter, params.max_samp, params.spsa)
    assert energy(g, best_bits, cost) == best_e
    return VQAResult(best_bits, best_e, log, converged_at,
                     is_dominating_set(g, best_bits), n_evals, total, final)
