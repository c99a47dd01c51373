"""
Variational training with a time-bin interferometer
===================================================

Samples from the interferometer are thresholded to bitstrings, randomly
flipped and scored with the penalised dominating-set energy; SPSA tunes the
beamsplitter angles and flip probabilities.  The running minimum energy is
the quantity tracked for convergence.
"""
import numpy as np

from tbibench import CostParams, GnpSpec, TBIConfig, generate_gnp
from tbibench.classical import exact_min_dominating_set, greedy_dominating_set
from tbibench.vqa import VQAParams, train

g = generate_gnp(GnpSpec(20, 0.3, seed=5))
rng = np.random.default_rng(5)

for delays in [(1,), (1, 1)]:
    config = TBIConfig.uniform(g.n, delays)
    params = VQAParams.initial(config, rng, max_iter=150)
    result = train(g, CostParams(), config, params, rng)
    per_iter = result.total_time_ns / result.iterations / 1e6
    print(f"loops {list(delays)}: best energy {result.min_energy}, "
          f"dominating={result.is_dominating}, converged at {result.converged_at}, "
          f"{per_iter:.1f} ms/iteration")
    trace = result.log.running_min
    print("  running minimum every 25 iterations:", trace[::25])

print("greedy size:", sum(greedy_dominating_set(g)),
      " exact size:", exact_min_dominating_set(g).size)
