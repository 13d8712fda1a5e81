"""Watch the attention fields evolve during one exploration trial.

Runs a single trial on the closed-loop scenario, snapshots the per-voxel
fields a few times, and renders the similarity and saliency maps as ASCII
shading together with the executed path.  Field rasters identical to
these snapshots can be exported with the ``dump-maps`` CLI subcommand.
"""

import numpy as np

from hapticbayes import (
    TrialConfig,
    bundled_library_path,
    generate_builtin_scenarios,
    load_library,
    run_trial,
)

SHADES = " .:-=+*#%@"


def render(field, grid, y_lo=22, y_hi=42, rescale=False):
    f = field.reshape(grid.ny, grid.nx)
    top = f.max() if rescale and f.max() > 0 else 1.0
    rows = []
    for y in range(y_lo, y_hi):
        idx = np.minimum((f[y] / top * (len(SHADES) - 1)).astype(int),
                         len(SHADES) - 1)
        rows.append("".join(SHADES[i] for i in idx))
    return rows


lib = load_library(bundled_library_path())
scenario = generate_builtin_scenarios(lib)[2]
grid = scenario.grid
snapshots = {}

record = run_trial(
    scenario, lib, TrialConfig(seed=19),
    on_iteration=lambda k, state: snapshots.__setitem__(k, state)
    if k in (4, 16, 30) else None,
)

print(f"trial on {scenario.name}: l = {record.l}, "
      f"gamma = {record.gamma * 100:.1f} cm, ended by {record.terminated_by}")

for k, state in snapshots.items():
    if k >= record.l:
        continue
    print(f"\niteration {k}: similarity (left) and saliency "
          f"(right, rescaled), rows 22-41")
    omega = render(state.omega, grid)
    sal = render(state.saliency, grid, rescale=True)
    for left, right in zip(omega, sal):
        print(f"   {left}   {right}")

path = {(v.ix, v.iy) for v in record.visited}
bench = {(v.ix, v.iy) for v in scenario.benchmark_path}
print("\nexecuted path (o) over the benchmark loop (-); the probe traces "
      "the island's edge until the loop-closure rule fires:")
for y in range(22, 42):
    line = ""
    for x in range(grid.nx):
        if (x, y) in path:
            line += "o"
        elif (x, y) in bench:
            line += "-"
        else:
            line += "."
    print("   " + line)
