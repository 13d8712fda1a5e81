"""Per-voxel Bayesian material inference from haptic feature observations.

The posterior over material categories is updated recursively: each new
sample multiplies the previous posterior by the Gaussian feature
likelihoods and renormalizes.  Updates run in log space with a
max-subtraction so that very unlikely materials underflow cleanly to zero
instead of poisoning the normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .materials import HapticSample, MaterialLibrary

#: Log-density floor; terms this far below the per-update maximum become 0.
LOG_FLOOR = -700.0

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class MaterialPosterior:
    """Categorical distribution over material classes for one voxel.

    ``k_count`` is the number of integrated samples; 0 denotes the uniform
    prior before any observation.  ``degenerate`` reports that the most
    recent update had all-zero evidence and kept the prior unchanged.
    """

    probs: np.ndarray
    k_count: int = 0
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))
        if self.k_count < 0:
            raise ValueError("k_count must be non-negative")
        if np.any(self.probs < 0) or abs(self.probs.sum() - 1.0) > 1e-9:
            raise ValueError("probs must be non-negative and sum to 1")

    @classmethod
    def uniform(cls, n: int) -> "MaterialPosterior":
        return cls(np.full(n, 1.0 / n), k_count=0)


def log_likelihoods(lib: MaterialLibrary, sample: HapticSample) -> np.ndarray:
    """Log of ``NormalPDF(e; mu_E, sigma_E) * NormalPDF(c; mu_C, sigma_C)``
    for every material, as a length-n vector."""
    ze = (sample.e - lib.mu_e) / lib.sigma_e
    zc = (sample.c - lib.mu_c) / lib.sigma_c
    with np.errstate(over="ignore"):      # huge z just pins the log to -inf
        return (-0.5 * (ze * ze + zc * zc)
                - np.log(lib.sigma_e) - np.log(lib.sigma_c) - _LOG_2PI)


def likelihood(lib: MaterialLibrary, material_index: int,
               sample: HapticSample) -> float:
    """Joint feature density of the sample under one material's model.

    May underflow to 0 for samples far from the material's means.
    """
    if not 0 <= material_index < len(lib):
        raise ValueError(f"material index {material_index} outside library")
    return float(np.exp(log_likelihoods(lib, sample)[material_index]))


def _posterior_update(probs: np.ndarray, log_lik: np.ndarray):
    """Shared update core; returns (new_probs, degenerate_flag)."""
    with np.errstate(divide="ignore"):
        lp = np.log(probs) + log_lik
    m = lp.max()
    if not np.isfinite(m):
        return probs.copy(), True
    w = np.exp(np.maximum(lp - m, LOG_FLOOR))
    w[lp - m <= LOG_FLOOR] = 0.0
    return w / w.sum(), False


def update_posterior(lib: MaterialLibrary, prior: MaterialPosterior,
                     sample: HapticSample) -> MaterialPosterior:
    """One recursive Bayes step: posterior ∝ prior × feature likelihoods.

    Feeding the returned posterior back as the next prior integrates
    repeated explorations of the same voxel.  If every likelihood floors
    to zero the prior is kept unchanged and the result carries
    ``degenerate=True``.
    """
    probs, degenerate = _posterior_update(prior.probs, log_likelihoods(lib, sample))
    return MaterialPosterior(probs, prior.k_count + 1, degenerate=degenerate)


def map_category(post: MaterialPosterior) -> int:
    """Index of the most probable material; ties break to the lowest index."""
    return int(np.argmax(post.probs))


def normalized_entropy(post: MaterialPosterior) -> float:
    """Shannon entropy of the posterior scaled to [0, 1] by log(n)."""
    p = post.probs
    nz = p > 0
    h = -float(np.sum(p[nz] * np.log(p[nz])))
    return h / math.log(p.size)


class PosteriorGrid:
    """Material posteriors for every voxel of a workspace grid.

    Stores a ``(theta, n)`` probability matrix plus per-voxel sample
    counts, in linear-index order.  Rows start at the uniform prior.
    Distinct voxels may be updated independently.
    """

    def __init__(self, theta: int, n_materials: int):
        self.probs = np.full((theta, n_materials), 1.0 / n_materials)
        self.k_counts = np.zeros(theta, dtype=int)
        self.degenerate_events = 0

    @property
    def theta(self) -> int:
        return self.probs.shape[0]

    @property
    def n_materials(self) -> int:
        return self.probs.shape[1]

    def posterior(self, linear: int) -> MaterialPosterior:
        return MaterialPosterior(self.probs[linear].copy(),
                                 int(self.k_counts[linear]))

    def update(self, linear: int, lib: MaterialLibrary,
               sample: HapticSample) -> MaterialPosterior:
        """Recursive update of one voxel's posterior in place."""
        new_probs, degenerate = _posterior_update(
            self.probs[linear], log_likelihoods(lib, sample))
        self.probs[linear] = new_probs
        self.k_counts[linear] += 1
        if degenerate:
            self.degenerate_events += 1
        return MaterialPosterior(new_probs.copy(), int(self.k_counts[linear]),
                                 degenerate=degenerate)

    def entropies(self) -> np.ndarray:
        """Normalized entropy of every row, vectorized."""
        with np.errstate(divide="ignore", invalid="ignore"):
            plogp = np.where(self.probs > 0, self.probs * np.log(self.probs), 0.0)
        return -plogp.sum(axis=1) / math.log(self.n_materials)
