"""
tbibench
========

Exact simulation of loop-based time-bin interferometers, a variational
dominating-set optimiser driven by that simulator, classical baselines and a
benchmark harness.

Modules
-------
::

 graph      -- Graph type, reproducible G(n, p), edge-list I/O, domination check
 cost       -- Penalty-augmented dominating-set energy
 tbi        -- Loop layouts, circuits, single-photon unitaries
 fock       -- Fock-state evolution, exact distributions, sequential sampler
 permanent  -- Ryser permanent and collision-free amplitude oracle
 vqa        -- SPSA-trained sample/flip/score loop
 classical  -- Brute force, branch-and-bound, greedy, independent set
 bench      -- Experiment grids, summaries, CSV output
 cli        -- ``tbibench`` command line
"""
__version__ = "0.1.0"

from .cost import CostParams, Variant, energy, penalty
from .fock import (
    FockState,
    SequentialSampler,
    alternating_input,
    beamsplitter_apply,
    exact_distribution,
    sample,
    threshold_map,
)
from .graph import Graph, GnpSpec, generate_gnp, is_dominating_set, load_graph, save_graph
from .permanent import amplitude_oracle, permanent
from .tbi import TBIConfig, build_circuit, mode_unitary

__all__ = [
    "CostParams",
    "FockState",
    "GnpSpec",
    "Graph",
    "SequentialSampler",
    "TBIConfig",
    "Variant",
    "alternating_input",
    "amplitude_oracle",
    "beamsplitter_apply",
    "build_circuit",
    "energy",
    "exact_distribution",
    "generate_gnp",
    "is_dominating_set",
    "load_graph",
    "mode_unitary",
    "penalty",
    "permanent",
    "sample",
    "save_graph",
    "threshold_map",
]
