"""How recognition accuracy degrades as the sensing noise grows.

Sweeps the additive-noise scale over 1.0x, 1.5x and 2.0x the base level
for single-sample and five-sample classification.  Accuracy falls with
noise, and the five-sample curve dominates the single-sample curve at
every level: repeated touching buys back what the noise destroys.
"""

from hapticbayes import (
    NoiseSpec,
    bundled_library_path,
    load_library,
    run_noise_sweep,
)

lib = load_library(bundled_library_path())
scales = (1.0, 1.5, 2.0)
sweep = run_noise_sweep(lib, [NoiseSpec.uniform(s) for s in scales],
                        trials=400, k_list=(1, 5), seed=0)

print("mean recognition accuracy (400 trials/material):\n")
print("   noise scale   k=1     k=5     gain")
for i, scale in enumerate(sweep.scales):
    a1, a5 = sweep.accuracy[i]
    print(f"   {scale:9.1f}   {a1:5.1%}  {a5:5.1%}  {a5 - a1:+5.1%}")

print("\nthe accuracy loss per noise step is steep for single samples; "
      "integration attenuates it at every noise level.")
