"""Experiment harness: confusion matrices, noise sweeps, exploration
benchmarks, and attention-field dumps.

Every experiment is seeded and bit-reproducible; independent cells derive
their seed as ``seed + cell_index``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .attention import AttentionState
from .grid import WorkspaceGrid
from .materials import MaterialLibrary, NoiseSpec, synthesize_sample
from .perception import MaterialPosterior, map_category, update_posterior
from .simulator import Scenario, TrialConfig, TrialRecord, run_trial


@dataclass
class ConfusionMatrix:
    """Classification outcomes: rows are ground truth, columns MAP picks."""

    counts: np.ndarray
    trials_per_material: int
    k_samples: int
    material_names: tuple = ()

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=int)

    def diagonal_rates(self) -> np.ndarray:
        return np.diag(self.counts) / self.trials_per_material

    def mean_diagonal_rate(self) -> float:
        return float(self.diagonal_rates().mean())

    def to_csv(self) -> str:
        names = self.material_names or tuple(
            f"material_{i + 1}" for i in range(self.counts.shape[0]))
        lines = ["truth\\predicted," + ",".join(names)]
        for name, row in zip(names, self.counts):
            lines.append(name + "," + ",".join(str(int(c)) for c in row))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "trials_per_material": self.trials_per_material,
            "k_samples": self.k_samples,
            "material_names": list(self.material_names),
            "counts": self.counts.tolist(),
            "diagonal_rates": self.diagonal_rates().tolist(),
            "mean_diagonal_rate": self.mean_diagonal_rate(),
        }


@dataclass
class NoiseSweepResult:
    """Mean recognition accuracy by (noise scale, sample count)."""

    scales: tuple
    k_list: tuple
    accuracy: np.ndarray               # (len(scales), len(k_list))

    def to_csv(self) -> str:
        lines = ["noise_scale,k_samples,accuracy"]
        for i, s in enumerate(self.scales):
            for j, k in enumerate(self.k_list):
                lines.append(f"{s:g},{k},{self.accuracy[i, j]:.6f}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "scales": list(self.scales),
            "k_list": list(self.k_list),
            "accuracy": self.accuracy.tolist(),
        }


@dataclass
class ExperimentReport:
    """Per-trial exploration records plus aggregate statistics."""

    scenario_name: str
    trials: tuple
    config: dict
    aggregates: dict = field(init=False)

    def __post_init__(self):
        self.trials = tuple(self.trials)
        self.aggregates = self.compute_aggregates()

    def compute_aggregates(self) -> dict:
        ls = np.array([t.l for t in self.trials], dtype=float)
        gs = np.array([t.gamma for t in self.trials])
        gpl = np.array([t.gamma_per_l for t in self.trials])
        agg = {}
        for key, arr in (("l", ls), ("gamma", gs), ("gamma_per_l", gpl)):
            agg[key] = {"mean": float(arr.mean()), "std": float(arr.std())}
        agg["loop_closures"] = sum(t.terminated_by == "loop_closure"
                                   for t in self.trials)
        return agg

    @property
    def seeds(self) -> list[int]:
        return [t.seed for t in self.trials]

    def to_csv(self) -> str:
        lines = ["trial,seed,l,gamma_m,gamma_per_l_m,terminated_by,"
                 "revisits,degenerate_events"]
        for i, t in enumerate(self.trials, start=1):
            lines.append(f"{i},{t.seed},{t.l},{t.gamma:.6f},"
                         f"{t.gamma_per_l:.6f},{t.terminated_by},"
                         f"{t.revisit_count},{t.degenerate_events}")
        for stat in ("mean", "std"):
            a = self.aggregates
            lines.append(f"{stat},,{a['l'][stat]:.4f},{a['gamma'][stat]:.6f},"
                         f"{a['gamma_per_l'][stat]:.6f},,,")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "scenario": self.scenario_name,
            "config": self.config,
            "seeds": self.seeds,
            "trials": [
                {
                    "seed": t.seed,
                    "l": t.l,
                    "gamma_m": t.gamma,
                    "gamma_per_l_m": t.gamma_per_l,
                    "terminated_by": t.terminated_by,
                    "revisits": t.revisit_count,
                    "degenerate_events": t.degenerate_events,
                    "visited": [[v.ix, v.iy, v.iz] for v in t.visited],
                }
                for t in self.trials
            ],
            "aggregates": self.aggregates,
        }


# ---------------------------------------------------------------------------
# experiments

def run_classification_experiment(lib: MaterialLibrary,
                                  trials_per_material: int = 400,
                                  k_samples: int = 5,
                                  noise: NoiseSpec = NoiseSpec(),
                                  seed: int = 0) -> ConfusionMatrix:
    """Recognition experiment over every material in the library.

    For each material, ``trials_per_material`` independent trials each draw
    ``k_samples`` noisy samples, integrate them by recursive posterior
    updates from the uniform prior, and record the MAP category.  Material
    cells use derived seeds ``seed + material_index``.
    """
    if trials_per_material < 1 or k_samples < 1:
        raise ValueError("trials_per_material and k_samples must be >= 1")
    n = len(lib)
    counts = np.zeros((n, n), dtype=int)
    for i in range(n):
        rng = np.random.default_rng(seed + i)
        for _ in range(trials_per_material):
            post = MaterialPosterior.uniform(n)
            for _ in range(k_samples):
                post = update_posterior(lib, post,
                                        synthesize_sample(lib, i, noise, rng))
            counts[i, map_category(post)] += 1
    return ConfusionMatrix(counts, trials_per_material, k_samples,
                           tuple(lib.names))


def run_noise_sweep(lib: MaterialLibrary,
                    scales: Sequence[NoiseSpec],
                    trials: int = 400,
                    k_list: Sequence[int] = (1, 5),
                    seed: int = 0) -> NoiseSweepResult:
    """Mean recognition accuracy across noise scales and sample counts.

    Each (scale, k) cell reruns the classification experiment with the
    derived seed ``seed + cell_index``.
    """
    if not scales or not k_list:
        raise ValueError("scales and k_list must be non-empty")
    acc = np.zeros((len(scales), len(k_list)))
    for i, scale in enumerate(scales):
        for j, k in enumerate(k_list):
            cell_seed = seed + i * len(k_list) + j
            cm = run_classification_experiment(lib, trials, k, scale, cell_seed)
            acc[i, j] = cm.mean_diagonal_rate()
    scale_tags = tuple(s.scale_E for s in scales)
    return NoiseSweepResult(scale_tags, tuple(k_list), acc)


def run_exploration_benchmark(scenario: Scenario, lib: MaterialLibrary,
                              n_trials: int = 10,
                              config: TrialConfig = TrialConfig(),
                              ) -> ExperimentReport:
    """Run seeded trials on one scenario; trial i uses seed ``seed + i``."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    trials: list[TrialRecord] = []
    for i in range(n_trials):
        cfg = TrialConfig(config.max_iterations, config.noise,
                          config.seed + i, config.factors)
        trials.append(run_trial(scenario, lib, cfg))
    echo = {
        "n_trials": n_trials,
        "max_iterations": config.max_iterations,
        "noise_scale_E": config.noise.scale_E,
        "noise_scale_C": config.noise.scale_C,
        "base_seed": config.seed,
        "beta_factors": [list(f) for f in config.factors],
    }
    return ExperimentReport(scenario.name, trials, echo)


# ---------------------------------------------------------------------------
# field dumps

#: Field name -> AttentionState attribute, in dump order.
DUMP_FIELDS = (
    ("inhibition", "inhibition"),
    ("uncertainty", "uncertainty"),
    ("omega", "omega"),
    ("saliency", "saliency"),
    ("target", "target_posterior"),
)


def dump_fields(grid: WorkspaceGrid, state: AttentionState, iteration: int,
                destination: Union[str, Path]) -> list[Path]:
    """Write the five per-voxel fields as row-major numeric text grids.

    One file per field named ``<field>_k<iteration>.txt``; each file holds
    ``ny * nz`` lines of ``nx`` values (z-planes stacked, lowest plane
    first), printed with 9 significant digits.
    """
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    for name, attr in DUMP_FIELDS:
        values = np.asarray(getattr(state, attr)).reshape(
            grid.ny * grid.nz, grid.nx)
        path = dest / f"{name}_k{iteration:04d}.txt"
        np.savetxt(path, values, fmt="%.9g")
        written.append(path)
    return written


def load_field_dump(path: Union[str, Path]) -> np.ndarray:
    """Re-parse a dumped field raster into a flat array."""
    return np.loadtxt(path).ravel()


# ---------------------------------------------------------------------------
# output helpers shared with the CLI

def write_output(obj, stem: str, out_dir: Union[str, Path],
                 fmt: str = "csv") -> Path:
    """Serialize a result object to ``<out_dir>/<stem>.<fmt>``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = out / f"{stem}.csv"
        path.write_text(obj.to_csv())
    elif fmt == "json":
        path = out / f"{stem}.json"
        path.write_text(json.dumps(obj.to_json_dict(), indent=2) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path
