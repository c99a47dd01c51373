"""
A small benchmark grid
======================

Runs every solver over a few (n, p) cells, writes the record CSV, run
metadata and the two plot-data tables, and prints the summary.
"""
import tempfile
from pathlib import Path

from tbibench.bench import expand_grid, run_suite, summarize, write_results

config = {
    "methods": ["exact", "greedy", "independent", "tbi-vqa"],
    "n": [10, 20],
    "p": [0.05, 0.3],
    "graph_seeds": [0, 1, 2],
    "vqa": {"max_iter": 60, "max_samp": 50},
    "parallelism": 4,
}
records = run_suite(expand_grid(config), parallelism=config["parallelism"])

out = Path(tempfile.mkdtemp(prefix="tbibench-"))
paths = write_results(records, out, config)
for name, path in paths.items():
    print(f"{name:>13}: {path}")

for row in summarize(records):
    print(f"{row.method:>12} n={row.n:<3} p={row.p:<5} size {row.size_mean:5.2f} "
          f"[{row.size_min}, {row.size_max}]  {row.time_ns_mean / 1e6:9.2f} ms")
