"""Experiment grid runner, aggregation and CSV/JSON output."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from statistics import mean
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .classical import (
    exact_min_dominating_set,
    greedy_dominating_set,
    independent_dominating_set,
)
from .cost import CostParams
from .graph import GnpSpec, generate_gnp, is_dominating_set
from .tbi import TBIConfig
from .vqa import SPSASchedule, VQAParams, train

__all__ = [
    "BenchmarkRecord",
    "METHODS",
    "RunSpec",
    "SummaryRow",
    "VQASettings",
    "emit_plot_data",
    "expand_grid",
    "load_plot_data",
    "load_suite_config",
    "run_suite",
    "summarize",
    "timing_overhead_ns",
    "write_results",
]

log = logging.getLogger(__name__)

METHODS = ("exact", "greedy", "independent", "tbi-vqa")
PLOT_COLUMNS = ("method", "n", "p", "size_mean", "size_min", "size_max", "time_ns_mean")
DEFAULT_MAX_N = 250


@dataclass(frozen=True)
class VQASettings:
    loops: tuple[int, ...] = (1,)
    learning_rate: float = 0.1
    max_iter: int = 250
    max_samp: int = 100
    c: float = 0.1
    stability: float = 10.0
    early_stop: bool = False
    window: int = 50

    @classmethod
    def from_dict(cls, d: dict) -> "VQASettings":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown vqa settings: {sorted(unknown)}")
        d = dict(d)
        if "loops" in d:
            d["loops"] = tuple(d["loops"])
        return cls(**d)


@dataclass(frozen=True)
class RunSpec:
    method: str
    graph: GnpSpec
    cost: CostParams = CostParams()
    vqa: VQASettings = VQASettings()
    run_seeds: tuple[int, ...] = (0,)
    bb_node_budget: int | None = None
    max_n: int = DEFAULT_MAX_N

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if len(set(self.run_seeds)) != len(self.run_seeds):
            raise ValueError("run seeds must be distinct")

    @property
    def label(self) -> str:
        if self.method == "tbi-vqa" and self.vqa.loops != (1,):
            return "tbi-vqa:" + ",".join(map(str, self.vqa.loops))
        return self.method


@dataclass
class BenchmarkRecord:
    method: str
    n: int
    p: float
    graph_seed: int
    run_seed: int
    found_dominating: bool = False
    set_size: int | None = None
    total_train_time_ns: int | None = None
    time_per_update_ns: int | None = None
    iterations: int | None = None
    iterations_to_converge: int | None = None
    time_to_converge_ns: int | None = None
    solver_time_ns: int | None = None
    optimal: bool | None = None
    error: str | None = None

    @property
    def time_ns(self) -> int | None:
        return self.solver_time_ns if self.solver_time_ns is not None else self.total_train_time_ns


TIMING_FIELDS = ("total_train_time_ns", "time_per_update_ns", "time_to_converge_ns", "solver_time_ns")
RECORD_COLUMNS = tuple(f.name for f in fields(BenchmarkRecord))


def timing_overhead_ns(repeats: int = 1000) -> float:
    """Mean cost of one empty timed region, for checking harness overhead."""
    clock = time.monotonic_ns
    start = clock()
    for _ in range(repeats):
        t0 = clock()
        clock() - t0
    return (clock() - start) / repeats


def _run_one(spec: RunSpec, run_seed: int) -> BenchmarkRecord:
    gs = spec.graph
    rec = BenchmarkRecord(spec.label, gs.n, gs.p, gs.seed, run_seed)
    try:
        if spec.method in ("exact", "tbi-vqa") and gs.n > spec.max_n:
            raise ValueError(f"n={gs.n} exceeds the cap of {spec.max_n} for {spec.method}")
        g = generate_gnp(gs)
        if spec.method == "tbi-vqa":
            _run_vqa(spec, g, run_seed, rec)
        else:
            t0 = time.monotonic_ns()
            if spec.method == "exact":
                res = exact_min_dominating_set(g, spec.bb_node_budget)
                bits, rec.optimal = res.bits, res.optimal
            elif spec.method == "greedy":
                bits = greedy_dominating_set(g)
            else:
                bits = independent_dominating_set(g)
            rec.solver_time_ns = time.monotonic_ns() - t0
            rec.found_dominating = is_dominating_set(g, bits)
            rec.set_size = sum(bits)
    except Exception as exc:  # recorded, suite continues
        log.warning("run %s n=%d p=%g seed=%d failed: %s", spec.label, gs.n, gs.p, gs.seed, exc)
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _run_vqa(spec: RunSpec, g, run_seed: int, rec: BenchmarkRecord) -> None:
    s = spec.vqa
    rng = np.random.default_rng([spec.graph.seed, run_seed])
    config = TBIConfig.uniform(g.n, s.loops)
    t0 = time.monotonic_ns()
    params = VQAParams.initial(
        config, rng, learning_rate=s.learning_rate, max_iter=s.max_iter, max_samp=s.max_samp,
        spsa=SPSASchedule(c=s.c, stability=s.stability),
    )
    result = train(g, spec.cost, config, params, rng, early_stop=s.early_stop, window=s.window)
    total = time.monotonic_ns() - t0
    rec.found_dominating = result.is_dominating
    rec.set_size = sum(result.best_bitstring)
    rec.iterations = result.iterations
    rec.total_train_time_ns = total
    rec.time_per_update_ns = total // result.iterations
    if result.converged_at is not None:
        rec.iterations_to_converge = result.converged_at
        rec.time_to_converge_ns = result.converged_at * rec.time_per_update_ns


def run_suite(specs: Sequence[RunSpec], parallelism: int = 1) -> list[BenchmarkRecord]:
    """Execute every (spec, run seed) pair; records come back in spec order."""
    jobs = [(spec, seed) for spec in specs for seed in spec.run_seeds]
    if parallelism <= 1:
        return [_run_one(spec, seed) for spec, seed in jobs]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(lambda job: _run_one(*job), jobs))


def expand_grid(config: dict) -> list[RunSpec]:
    """Cartesian product methods x n x p x graph_seeds from a suite config dict."""
    cost = CostParams(int(config.get("penalty_scale", 2)), config.get("variant", "self-dominating"))
    vqa = VQASettings.from_dict(config.get("vqa", {}))
    run_seeds = tuple(config.get("run_seeds", (0,)))
    budget = config.get("bb_node_budget")
    max_n = int(config.get("max_n", DEFAULT_MAX_N))
    return [
        RunSpec(method, GnpSpec(int(n), float(p), int(s)), cost, vqa, run_seeds, budget, max_n)
        for method in config["methods"]
        for n in config["n"]
        for p in config["p"]
        for s in config["graph_seeds"]
    ]


def load_suite_config(text: str) -> dict:
    config = json.loads(text)
    missing = [k for k in ("methods", "n", "p", "graph_seeds") if k not in config]
    if missing:
        raise ValueError(f"suite config missing keys: {missing}")
    return config


def _config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()


def records_to_csv(records: Iterable[BenchmarkRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RECORD_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: ("" if v is None else v) for k, v in asdict(r).items()})
    return buf.getvalue()


def write_results(records: Sequence[BenchmarkRecord], out_dir, config: dict) -> dict[str, Path]:
    """Write ``records.csv``, ``metadata.json`` and the plot-data CSVs into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"records": out / "records.csv", "metadata": out / "metadata.json"}
    paths["records"].write_text(records_to_csv(records))
    clock = time.get_clock_info("monotonic")
    meta = {
        "version": __version__,
        "config_hash": _config_hash(config),
        "config": config,
        "parallelism": int(config.get("parallelism", 1)),
        "clock": {"source": "monotonic_ns", "implementation": clock.implementation,
                  "resolution_s": clock.resolution},
        "n_records": len(records),
        "n_errors": sum(r.error is not None for r in records),
    }
    paths["metadata"].write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    paths.update(emit_plot_data(summarize(records) if records else [], out))
    return paths


@dataclass(frozen=True)
class SummaryRow:
    method: str
    n: int
    p: float
    count: int
    size_mean: float
    size_min: int
    size_max: int
    time_ns_mean: float
    converge_time_ns_mean: float | None = None


def summarize(records: Sequence[BenchmarkRecord]) -> list[SummaryRow]:
    """Mean and spread of set size and mean runtime per ``(method, n, p)``."""
    if not records:
        raise ValueError("nothing to summarise")
    groups: dict[tuple, list[BenchmarkRecord]] = {}
    for r in records:
        groups.setdefault((r.method, r.n, r.p), []).append(r)
    rows = []
    for (method, n, p), group in groups.items():
        ok = [r for r in group if r.error is None and r.set_size is not None]
        if not ok:
            warnings.warn(f"no successful runs for {method} n={n} p={p}; group omitted")
            continue
        sizes = [r.set_size for r in ok]
        conv = [r.time_to_converge_ns for r in ok if r.time_to_converge_ns is not None]
        rows.append(SummaryRow(
            method, n, p, len(ok), mean(sizes), min(sizes), max(sizes),
            mean(r.time_ns for r in ok), mean(conv) if conv else None,
        ))
    rows.sort(key=lambda r: (r.method, r.p, r.n))
    return rows


def emit_plot_data(summary: Sequence[SummaryRow], out_dir) -> dict[str, Path]:
    """Write ``size_vs_n.csv`` and ``runtime_vs_n.csv`` (same columns, one row per group)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name in ("size_vs_n", "runtime_vs_n"):
        path = out / f"{name}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(PLOT_COLUMNS)
            for r in summary:
                writer.writerow([r.method, r.n, repr(r.p), repr(float(r.size_mean)), r.size_min,
                                 r.size_max, repr(float(r.time_ns_mean))])
        paths[name] = path
    return paths


def load_plot_data(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        {"method": r["method"], "n": int(r["n"]), "p": float(r["p"]),
         "size_mean": float(r["size_mean"]), "size_min": int(r["size_min"]),
         "size_max": int(r["size_max"]), "time_ns_mean": float(r["time_ns_mean"])}
        for r in rows
    ]
