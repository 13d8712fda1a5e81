"""Actively explore the three bundled silicone/wood scenarios.

Ten seeded trials per scenario run the full action-perception loop: touch
a voxel, update its material posterior, recompute the attention fields,
and move to the most promising voxel.  The table mirrors the benchmark
report: per-trial path length l, total divergence from the benchmark
discontinuity (gamma, in cm), and the per-iteration average.
"""

from hapticbayes import (
    TrialConfig,
    bundled_library_path,
    generate_builtin_scenarios,
    load_library,
    run_exploration_benchmark,
)

lib = load_library(bundled_library_path())
descriptions = {
    "scenario-1": "straight discontinuity along the workspace edge",
    "scenario-2": "S-curved discontinuity (progressive slope inversion)",
    "scenario-3": "closed-loop discontinuity around a thin island",
}

for scenario in generate_builtin_scenarios(lib):
    report = run_exploration_benchmark(scenario, lib, n_trials=10,
                                       config=TrialConfig(seed=0))
    print(f"\n{scenario.name}: {descriptions[scenario.name]}")
    print(f"   benchmark voxels: {len(scenario.benchmark_path)}, "
          f"start {tuple(scenario.start)}")
    print("   trial   l   gamma(cm)  gamma/l(cm)  end")
    for i, t in enumerate(report.trials, start=1):
        print(f"   {i:5d} {t.l:3d} {t.gamma * 100:9.1f} {t.gamma_per_l * 100:12.2f}"
              f"  {t.terminated_by}")
    agg = report.aggregates
    print(f"   mean  {agg['l']['mean']:5.1f} {agg['gamma']['mean'] * 100:7.1f}"
          f" {agg['gamma_per_l']['mean'] * 100:12.2f}"
          f"  ({agg['loop_closures']}/10 loop closures)")

print("\nmean divergence stays below one voxel (1 cm) per iteration: the "
      "probe keeps hugging whichever discontinuity it is given.")
