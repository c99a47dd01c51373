from collections import Counter

import numpy as np
import pytest

import tbibench.vqa as vqa_mod
from tbibench.classical import exact_min_dominating_set
from tbibench.cost import CostParams, energy
from tbibench.errors import TrainingAborted
from tbibench.fock import alternating_input, exact_distribution, threshold_map
from tbibench.graph import Graph, GnpSpec, generate_gnp, is_dominating_set
from tbibench.tbi import TBIConfig
from tbibench.vqa import (
    SPSASchedule,
    VQAParams,
    _draw_candidates,
    bit_flip,
    detect_convergence,
    evaluate_objective,
    spsa_step,
    train,
)
from tbibench.fock import SequentialSampler


def make_params(cfg, thetas=0.0, flips=0.0, **kw):
    return VQAParams(np.full(cfg.n_angles, thetas), np.full(cfg.n_modes, flips), **kw)


def test_objective_deterministic_path(rng):
    g = generate_gnp(GnpSpec(8, 0.3, 4))
    cfg = TBIConfig.uniform(8, [1])
    mean, (best, e) = evaluate_objective(g, make_params(cfg, max_samp=50), cfg, rng)
    assert best == (1, 0) * 4
    assert mean == energy(g, "10101010") == e


def test_objective_all_flips_complements(rng):
    g = generate_gnp(GnpSpec(8, 0.3, 4))
    cfg = TBIConfig.uniform(8, [1])
    mean, (best, e) = evaluate_objective(g, make_params(cfg, flips=1.0, max_samp=20), cfg, rng)
    assert best == (0, 1) * 4
    assert mean == energy(g, "01010101")


def test_objective_k4_best_at_least_one(rng):
    g = Graph.complete(4)
    assert exact_min_dominating_set(g).size == 1
    cfg = TBIConfig.uniform(4, [1])
    for _ in range(5):
        params = VQAParams.initial(cfg, rng, max_samp=100)
        _, (_, e) = evaluate_objective(g, params, cfg, rng)
        assert e >= 1


def test_bit_flip_examples(rng):
    x = np.array([1, 0, 1, 1, 0])
    assert np.array_equal(bit_flip(x, np.zeros(5), rng), x)
    assert np.array_equal(bit_flip(x, np.ones(5), rng), 1 - x)
    with pytest.raises(ValueError):
        bit_flip(x, np.ones(4), rng)


def test_bit_flip_half_frequency(rng):
    x = np.array([1, 0, 1, 0, 0, 1])
    trials = np.stack([bit_flip(x, np.full(6, 0.5), rng) for _ in range(10_000)])
    freq = (trials != x).mean(axis=0)
    assert np.all(np.abs(freq - 0.5) < 0.02)


def test_spsa_gain_schedule():
    s = SPSASchedule(a=0.1, c=0.1, gamma=0.101)
    assert s.c_k(0) == 0.1
    assert s.c_k(9) == pytest.approx(0.1 / 10**0.101)
    assert s.a_k(0) == pytest.approx(0.1 / 11**0.602)


def test_spsa_two_evaluations_per_step(rng):
    calls = []

    def f(v):
        calls.append(v.copy())
        return float(v @ v)

    x = np.array([1.0, -2.0, 0.5])
    spsa_step(f, x, 3, rng)
    assert len(calls) == 2
    c3 = SPSASchedule().c_k(3)
    assert np.allclose(np.abs(calls[0] - x), c3)
    assert np.allclose(calls[0] - x, -(calls[1] - x))


def test_spsa_descends_quadratic_on_average(rng):
    x = np.array([0.8, -1.2, 0.3, 2.0])
    inner = []
    for _ in range(1000):
        new = spsa_step(lambda v: float(v @ v), x, 0, rng)
        inner.append((new - x) @ x)
    assert np.mean(inner) < 0


def test_spsa_projection_and_nonfinite(rng):
    x = np.array([0.5, 0.5])
    out = spsa_step(lambda v: 1e6 * v[0], x, 0, rng, project=lambda v: np.clip(v, 0, 1))
    assert np.all((out >= 0) & (out <= 1))
    with pytest.raises(TrainingAborted):
        spsa_step(lambda v: float("nan"), x, 0, rng)


def test_detect_convergence_examples():
    assert detect_convergence(list(range(200, 0, -1))) is None
    trace = [100 - i for i in range(31)] + [70] * 169
    assert detect_convergence(trace) == 80
    # decreases at 0, 40 and 120: the minimum first sits still for 50 iterations at t=90
    trace = [10] * 40 + [8] * 80 + [5] * 80
    assert len(trace) == 200
    assert detect_convergence(trace) == 90
    assert detect_convergence([3] * 10, window=50) is None
    with pytest.raises(ValueError):
        detect_convergence([1, 1], window=0)


def test_train_edgeless_finds_all_ones():
    g = Graph.empty(4)
    cfg = TBIConfig.uniform(4, [1])
    hits = 0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        r = train(g, CostParams(), cfg, VQAParams.initial(cfg, rng), rng)
        hits += r.min_energy == 4 and r.best_bitstring == (1, 1, 1, 1)
    assert hits >= 9


def test_train_complete_graph_reaches_one():
    g = Graph.complete(6)
    cfg = TBIConfig.uniform(6, [1])
    hits = 0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        r = train(g, CostParams(), cfg, VQAParams.initial(cfg, rng), rng)
        hits += r.min_energy == 1
    assert hits >= 8


def test_train_invariants():
    g = generate_gnp(GnpSpec(12, 0.3, 2))
    cfg = TBIConfig.uniform(12, [1])
    rng = np.random.default_rng(7)
    seen = []
    r = train(g, CostParams(), cfg, VQAParams.initial(cfg, rng, max_iter=60, max_samp=30), rng,
              on_evaluate=lambda v, f: seen.append(v[cfg.n_angles:].copy()))
    mins = r.log.running_min
    assert all(a >= b for a, b in zip(mins, mins[1:]))
    assert r.min_energy == mins[-1] == energy(g, r.best_bitstring)
    assert r.log.records[-1].best == "".join(map(str, r.best_bitstring))
    assert r.is_dominating == is_dominating_set(g, r.best_bitstring)
    assert r.n_evaluations == 2 * 60 == len(seen)
    assert np.all((r.final_params.flip_probs >= 0) & (r.final_params.flip_probs <= 1))
    times = [rec.t_ns for rec in r.log.records]
    assert all(a <= b for a, b in zip(times, times[1:]))


def test_flip_probs_stay_in_unit_interval(monkeypatch):
    seen = []
    real = vqa_mod.spsa_step

    def spy(objective, x, k, rng, schedule, project):
        out = real(objective, x, k, rng, schedule, project)
        seen.append(out.copy())
        return out

    monkeypatch.setattr(vqa_mod, "spsa_step", spy)
    g = generate_gnp(GnpSpec(10, 0.3, 1))
    cfg = TBIConfig.uniform(10, [1])
    rng = np.random.default_rng(1)
    train(g, CostParams(), cfg, VQAParams.initial(cfg, rng, max_iter=40, max_samp=20,
                                                  learning_rate=5.0), rng)
    flips = np.array(seen)[:, cfg.n_angles:]
    assert flips.min() >= 0.0 and flips.max() <= 1.0
    assert flips.min() == 0.0 or flips.max() == 1.0  # projection actually engaged


def test_train_deterministic():
    g = generate_gnp(GnpSpec(10, 0.4, 3))
    cfg = TBIConfig.uniform(10, [1, 1])

    def run():
        rng = np.random.default_rng(99)
        r = train(g, CostParams(), cfg, VQAParams.initial(cfg, rng, max_iter=30, max_samp=20), rng)
        return [(x.iter, x.mean_energy, x.min_energy, x.best) for x in r.log.records]

    assert run() == run()


def test_train_early_stop():
    g = Graph.complete(5)
    cfg = TBIConfig.uniform(5, [1])
    rng = np.random.default_rng(0)
    r = train(g, CostParams(), cfg, VQAParams.initial(cfg, rng, max_iter=500), rng,
              early_stop=True, window=20)
    assert r.converged_at is not None
    assert r.iterations == r.converged_at + 1 < 500


def test_train_rejects_mismatched_shapes(rng):
    g = Graph.complete(5)
    cfg = TBIConfig.uniform(5, [1])
    with pytest.raises(ValueError):
        train(g, CostParams(), TBIConfig.uniform(6, [1]), make_params(cfg), rng)
    with pytest.raises(ValueError):
        VQAParams(np.zeros(4), np.zeros(5), max_iter=0)


def test_log_jsonl_schema():
    import json

    g = Graph.complete(4)
    cfg = TBIConfig.uniform(4, [1])
    rng = np.random.default_rng(0)
    r = train(g, CostParams(), cfg, VQAParams.initial(cfg, rng, max_iter=5, max_samp=5), rng)
    lines = r.log.to_jsonl().splitlines()
    assert len(lines) == 5
    for i, line in enumerate(lines):
        doc = json.loads(line)
        assert set(doc) == {"iter", "mean_energy", "min_energy", "best", "t_ns"}
        assert doc["iter"] == i and isinstance(doc["min_energy"], int)
        assert isinstance(doc["t_ns"], int) and len(doc["best"]) == 4


@pytest.mark.parametrize("n", [4, 6])
def test_zero_flip_candidates_follow_threshold_distribution(n):
    rng = np.random.default_rng(n)
    cfg = TBIConfig.from_flat(n, [1], rng.uniform(0, np.pi, n - 1))
    inp = alternating_input(n)
    exact = Counter()
    for occ, prob in exact_distribution(cfg, inp).items():
        exact[threshold_map(occ)] += prob
    X = _draw_candidates(SequentialSampler(cfg), inp, np.zeros(n), 20_000, rng)
    emp = Counter(map(tuple, X.tolist()))
    keys = set(exact) | set(emp)
    tv = 0.5 * sum(abs(exact.get(k, 0.0) - emp.get(k, 0) / 20_000) for k in keys)
    assert tv < 0.03
