"""
Two-photon interference on a balanced beamsplitter
==================================================

Two photons enter the two ports of a 50:50 beamsplitter.  The exact
output distribution puts all weight on "both photons in the same port",
and the sequential sampler reproduces that with no coincidences.
"""
import math

import numpy as np

from tbibench import SequentialSampler, TBIConfig, exact_distribution, mode_unitary

# a single loop of delay 1 over two time bins is just one beamsplitter
config = TBIConfig.uniform(2, [1], math.pi / 4)
print("single-photon transfer matrix:\n", mode_unitary(config).round(4))

for outcome, prob in sorted(exact_distribution(config, (1, 1)).items()):
    print(f"P{outcome} = {prob:.6f}")

draws = SequentialSampler(config).draw_many((1, 1), 10_000, np.random.default_rng(0))
coincidences = np.sum((draws[:, 0] == 1) & (draws[:, 1] == 1))
print("coincidences in 10000 samples:", coincidences)

# a longer single-loop interferometer still holds at most two modes in memory
n = 100
config = TBIConfig.from_flat(n, [1], np.random.default_rng(1).uniform(0, np.pi, n - 1))
sampler = SequentialSampler(config)
x = sampler.draw((1, 0) * (n // 2), np.random.default_rng(2))
print(f"{n}-mode sample: {sum(x)} photons, peak live modes {sampler.peak_live_modes}")
