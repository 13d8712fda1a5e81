"""Material parameter library and synthetic haptic sample generation.

Each material carries Gaussian models for two scalar features: a texture
feature ``e`` and a compliance feature ``c`` (dimensionless feature units).
Synthetic sensing draws from those models and corrupts the draw with
additive white Gaussian noise whose standard deviation is half the feature
mean, optionally rescaled.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence, Union

import numpy as np

#: Required columns of a material parameter file.
LIBRARY_FIELDS = ("name", "mu_E", "sigma_E", "mu_C", "sigma_C")


class LibraryLoadError(ValueError):
    """Raised when a material parameter file is malformed."""


class HapticSample(NamedTuple):
    """One synthetic touch observation: texture and compliance values."""

    e: float
    c: float


@dataclass(frozen=True)
class NoiseSpec:
    """Multipliers on the per-material additive noise std ``|mu| / 2``.

    ``scale_E = scale_C = 1.0`` reproduces the base noise level; 0 disables
    the additive noise entirely.
    """

    scale_E: float = 1.0
    scale_C: float = 1.0

    def __post_init__(self):
        if self.scale_E < 0 or self.scale_C < 0:
            raise ValueError("noise scales must be non-negative")

    @classmethod
    def uniform(cls, scale: float) -> "NoiseSpec":
        return cls(scale, scale)


@dataclass(frozen=True)
class MaterialParams:
    name: str
    mu_E: float
    sigma_E: float
    mu_C: float
    sigma_C: float

    def __post_init__(self):
        if self.sigma_E <= 0 or self.sigma_C <= 0:
            raise ValueError(f"{self.name}: sigmas must be positive")


class MaterialLibrary:
    """Ordered collection of material parameter sets.

    The order is fixed and defines material indices 0..n-1.
    """

    def __init__(self, materials: Sequence[MaterialParams]):
        materials = list(materials)
        if len(materials) < 2:
            raise ValueError("a material library needs at least 2 materials")
        names = [m.name for m in materials]
        if len(set(names)) != len(names):
            raise ValueError("material names must be unique")
        self.materials = materials
        self._index = {m.name: i for i, m in enumerate(materials)}
        # column arrays for vectorized likelihoods
        self.mu_e = np.array([m.mu_E for m in materials])
        self.sigma_e = np.array([m.sigma_E for m in materials])
        self.mu_c = np.array([m.mu_C for m in materials])
        self.sigma_c = np.array([m.sigma_C for m in materials])

    def __len__(self) -> int:
        return len(self.materials)

    def __getitem__(self, i: int) -> MaterialParams:
        return self.materials[i]

    @property
    def names(self) -> list[str]:
        return [m.name for m in self.materials]

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown material name {name!r}") from None


def bundled_library_path() -> Path:
    """Path of the parameter file shipped with the package."""
    return Path(resources.files("hapticbayes").joinpath("data/materials.csv"))


def load_library(source: Union[str, Path]) -> MaterialLibrary:
    """Load a material library from a CSV parameter file.

    The file must have exactly the header columns ``name, mu_E, sigma_E,
    mu_C, sigma_C``; lines starting with ``#`` are comments.  Any unknown
    or missing column, duplicate name, or non-positive sigma rejects the
    file with a :class:`LibraryLoadError` naming the offending record.
    """
    path = Path(source)
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh)
                if r and not (r[0].lstrip().startswith("#"))]
    if not rows:
        raise LibraryLoadError(f"{path}: empty parameter file")
    header = [h.strip() for h in rows[0]]
    if sorted(header) != sorted(LIBRARY_FIELDS):
        unknown = set(header) - set(LIBRARY_FIELDS)
        missing = set(LIBRARY_FIELDS) - set(header)
        raise LibraryLoadError(
            f"{path}: bad header (unknown fields {sorted(unknown)}, "
            f"missing fields {sorted(missing)})"
        )
    col = {name: header.index(name) for name in LIBRARY_FIELDS}
    materials = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise LibraryLoadError(f"{path}: record {i}: expected "
                                   f"{len(header)} fields, got {len(row)}")
        try:
            params = MaterialParams(
                name=row[col["name"]].strip(),
                mu_E=float(row[col["mu_E"]]),
                sigma_E=float(row[col["sigma_E"]]),
                mu_C=float(row[col["mu_C"]]),
                sigma_C=float(row[col["sigma_C"]]),
            )
        except ValueError as exc:
            raise LibraryLoadError(f"{path}: record {i}: {exc}") from None
        materials.append(params)
    try:
        return MaterialLibrary(materials)
    except ValueError as exc:
        raise LibraryLoadError(f"{path}: {exc}") from None


def synthesize_sample(lib: MaterialLibrary, material_index: int,
                      noise: NoiseSpec, rng: np.random.Generator) -> HapticSample:
    """Draw one noisy haptic sample of the given material.

    Draws ``e ~ N(mu_E, sigma_E)`` and ``c ~ N(mu_C, sigma_C)``, then adds
    independent noise ``q_E ~ N(0, scale_E * |mu_E| / 2)`` and
    ``q_C ~ N(0, scale_C * |mu_C| / 2)``.  The draw order is fixed
    (e, c, q_E, q_C) so a seeded generator reproduces the stream exactly.
    """
    if not 0 <= material_index < len(lib):
        raise ValueError(f"material index {material_index} outside library of "
                         f"{len(lib)}")
    m = lib[material_index]
    e = rng.normal(m.mu_E, m.sigma_E)
    c = rng.normal(m.mu_C, m.sigma_C)
    q_e = rng.normal(0.0, noise.scale_E * abs(m.mu_E) / 2.0)
    q_c = rng.normal(0.0, noise.scale_C * abs(m.mu_C) / 2.0)
    return HapticSample(e + q_e, c + q_c)
