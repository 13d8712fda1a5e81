"""Classify the ten reference materials from noisy touch samples.

Each trial draws texture/compliance samples corrupted with additive noise
(std = half the feature mean), integrates them by recursive Bayesian
updates, and picks the maximum a posteriori material.  Integrating five
samples instead of one lifts the mean recognition rate from roughly 66%
to about 90%.
"""

import numpy as np

from hapticbayes import (
    NoiseSpec,
    bundled_library_path,
    load_library,
    run_classification_experiment,
)

lib = load_library(bundled_library_path())
print(f"material library: {len(lib)} classes")
for m in lib.materials:
    print(f"   {m.name:12s} texture {m.mu_E:5.2f} ± {m.sigma_E:4.2f}   "
          f"compliance {m.mu_C:5.2f} ± {m.sigma_C:4.2f}")

for k in (1, 5):
    cm = run_classification_experiment(lib, trials_per_material=400,
                                       k_samples=k, noise=NoiseSpec(), seed=0)
    rates = cm.diagonal_rates()
    print(f"\nconfusion matrix, {k} sample(s) per trial "
          f"(mean recognition {cm.mean_diagonal_rate():.1%}):")
    width = max(len(n) for n in lib.names)
    for name, row, rate in zip(lib.names, cm.counts, rates):
        cells = " ".join(f"{c:4d}" for c in row)
        print(f"   {name:{width}s} {cells}   {rate:5.1%}")

print("\nmis-classifications concentrate in look-alike pairs "
      "(brick vs wood, copper vs acrylic) and are largely resolved "
      "by the five-sample integration.")
