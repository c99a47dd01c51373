"""Command line: ``tbibench {generate,solve,sample,train,bench}``.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .bench import expand_grid, load_suite_config, run_suite, summarize, write_results
from .classical import exact_min_dominating_set, greedy_dominating_set, independent_dominating_set
from .cost import CostParams, Variant
from .fock import SequentialSampler, alternating_input
from .graph import GnpSpec, bits_to_str, generate_gnp, is_dominating_set, load_graph, save_graph
from .tbi import TBIConfig
from .vqa import SPSASchedule, VQAParams, train


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _delays(text: str) -> tuple[int, ...]:
    try:
        delays = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"loop delays must be comma-separated integers: {text!r}")
    if not delays or any(d < 1 for d in delays):
        raise argparse.ArgumentTypeError("loop delays must be positive")
    return delays


def _angles(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"angles must be comma-separated radians: {text!r}")


def _occupation(text: str) -> tuple[int, ...]:
    parts = text.split(",") if "," in text else list(text)
    try:
        occ = tuple(int(c) for c in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad occupation vector {text!r}")
    if any(c < 0 for c in occ):
        raise argparse.ArgumentTypeError("occupation numbers must be non-negative")
    return occ


def _occ_key(occ) -> str:
    return "".join(map(str, occ)) if max(occ, default=0) < 10 else ",".join(map(str, occ))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tbibench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tbibench {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    out = _Parser(add_help=False)
    out.add_argument("--out", type=Path, help="write output here instead of standard output")
    cost = _Parser(add_help=False)
    cost.add_argument("--penalty-scale", type=int, default=2, help="penalty factor A (default 2)")
    cost.add_argument("--variant", choices=[v.value for v in Variant],
                      default=Variant.SELF_DOMINATING.value, help="domination rule")
    vqa = _Parser(add_help=False)
    vqa.add_argument("--loops", type=_delays, default=(1,),
                     help="comma-separated loop delays, e.g. 1 or 1,1 (default 1)")
    vqa.add_argument("--max-iter", type=int, default=250, help="training iterations (default 250)")
    vqa.add_argument("--max-samp", type=int, default=100, help="samples per evaluation (default 100)")
    vqa.add_argument("--learning-rate", type=float, default=0.1, help="SPSA gain a (default 0.1)")
    vqa.add_argument("--spsa-c", type=float, default=0.1, help="SPSA perturbation size c (default 0.1)")
    vqa.add_argument("--early-stop", action="store_true", help="stop at the first convergence point")
    vqa.add_argument("--window", type=int, default=50, help="convergence window (default 50)")

    p = sub.add_parser("generate", parents=[seeded, out], help="sample a G(n, p) graph")
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--p", type=float, required=True, help="edge probability")

    p = sub.add_parser("solve", parents=[seeded, out, cost, vqa], help="find a dominating set")
    p.add_argument("--method", choices=["exact", "greedy", "independent", "tbi-vqa"], required=True)
    p.add_argument("--graph-file", type=Path, required=True, help="edge-list graph")
    p.add_argument("--bb-node-budget", type=int, default=None,
                   help="node limit for the exact solver (default unlimited)")

    p = sub.add_parser("sample", parents=[seeded, out], help="draw interferometer samples")
    p.add_argument("--loops", type=_delays, default=(1,), help="comma-separated loop delays")
    p.add_argument("--n", type=int, help="mode count (required unless --angles-file)")
    p.add_argument("--angles", type=_angles, help="comma-separated angles in radians, loop by loop")
    p.add_argument("--angles-file", type=Path,
                   help='JSON {"n_modes", "loop_delays", "angles"} interferometer document')
    p.add_argument("--input", type=_occupation, help="input occupation, e.g. 1010 (default alternating)")
    p.add_argument("--samples", type=int, default=1000, help="number of samples (default 1000)")

    p = sub.add_parser("train", parents=[seeded, out, cost, vqa], help="run variational training")
    p.add_argument("--graph-file", type=Path, help="edge-list graph")
    p.add_argument("--n", type=int, help="generate a G(n, p) graph instead of --graph-file")
    p.add_argument("--p", type=float, help="edge probability for a generated graph")
    p.add_argument("--graph-seed", type=int, default=0, help="seed for a generated graph")
    p.add_argument("--log-out", type=Path, help="write the JSON-lines training log here")

    p = sub.add_parser("bench", parents=[seeded], help="run an experiment grid")
    p.add_argument("--config", type=Path, required=True, help="suite config JSON")
    p.add_argument("--out-dir", type=Path, required=True, help="directory for CSV/JSON results")
    return parser


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _vqa_params(args, config: TBIConfig, rng) -> VQAParams:
    return VQAParams.initial(
        config, rng, learning_rate=args.learning_rate, max_iter=args.max_iter,
        max_samp=args.max_samp, spsa=SPSASchedule(c=args.spsa_c),
    )


def _cmd_generate(args):
    g = generate_gnp(GnpSpec(args.n, args.p, args.seed))
    _emit(save_graph(g), args.out)


def _cmd_solve(args):
    g = load_graph(args.graph_file.read_text())
    doc = {"method": args.method}
    if args.method == "exact":
        res = exact_min_dominating_set(g, args.bb_node_budget)
        bits = res.bits
        doc["optimal"] = res.optimal
    elif args.method == "greedy":
        bits = greedy_dominating_set(g)
    elif args.method == "independent":
        bits = independent_dominating_set(g)
    else:
        rng = np.random.default_rng(args.seed)
        config = TBIConfig.uniform(g.n, args.loops)
        result = train(g, CostParams(args.penalty_scale, args.variant), config,
                       _vqa_params(args, config, rng), rng,
                       early_stop=args.early_stop, window=args.window)
        bits = result.best_bitstring
        doc["min_energy"] = result.min_energy
        doc["converged_at"] = result.converged_at
    doc.update(set_size=sum(bits), bitstring=bits_to_str(bits),
               dominating=is_dominating_set(g, bits))
    _emit(json.dumps(doc) + "\n", args.out)


def _cmd_sample(args):
    if args.angles_file is not None:
        config = TBIConfig.from_json(args.angles_file.read_text())
    else:
        if args.n is None or args.angles is None:
            raise UsageError("sample needs --n and --angles, or --angles-file")
        if len(args.angles) == 1:
            config = TBIConfig.uniform(args.n, args.loops, args.angles[0])
        else:
            config = TBIConfig.from_flat(args.n, args.loops, args.angles)
    occ = args.input if args.input is not None else alternating_input(config.n_modes)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rng = np.random.default_rng(args.seed)
    draws = SequentialSampler(config).draw_many(occ, args.samples, rng)
    counts = Counter(_occ_key(row) for row in draws.tolist())
    _emit(json.dumps(dict(sorted(counts.items()))) + "\n", args.out)


def _cmd_train(args):
    if args.graph_file is not None:
        g = load_graph(args.graph_file.read_text())
    elif args.n is not None and args.p is not None:
        g = generate_gnp(GnpSpec(args.n, args.p, args.graph_seed))
    else:
        raise UsageError("train needs --graph-file, or --n and --p")
    rng = np.random.default_rng(args.seed)
    config = TBIConfig.uniform(g.n, args.loops)
    result = train(g, CostParams(args.penalty_scale, args.variant), config,
                   _vqa_params(args, config, rng), rng,
                   early_stop=args.early_stop, window=args.window)
    if args.log_out is not None:
        args.log_out.write_text(result.log.to_jsonl())
    doc = {
        "best": bits_to_str(result.best_bitstring),
        "min_energy": result.min_energy,
        "set_size": sum(result.best_bitstring),
        "dominating": result.is_dominating,
        "iterations": result.iterations,
        "converged_at": result.converged_at,
    }
    _emit(json.dumps(doc) + "\n", args.out)


def _cmd_bench(args):
    config = load_suite_config(args.config.read_text())
    records = run_suite(expand_grid(config), int(config.get("parallelism", 1)))
    paths = write_results(records, args.out_dir, config)
    n_err = sum(r.error is not None for r in records)
    print(f"{len(records)} records ({n_err} errors) -> {paths['records']}")
    if records:
        for row in summarize(records):
            print(f"{row.method:>14} n={row.n:<4} p={row.p:<5} size={row.size_mean:.2f} "
                  f"[{row.size_min}, {row.size_max}]")


COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "sample": _cmd_sample,
    "train": _cmd_train,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"tbibench: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
