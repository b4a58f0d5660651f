"""Equal-width characteristic points and the piecewise-linear attribute vector.

Each attribute j is split into ``gamma_j`` equal sub-intervals of its
training range [alpha_j, beta_j]. An observed value becomes a block of
``gamma_j`` components: 1 for every sub-interval lying wholly below the
value, the covered fraction of the sub-interval containing it, and 0
above. Blocks are concatenated into one vector of length
``gamma_total``, so a linear form over that vector is a continuous
piecewise-linear function of each attribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset_io import Dataset

DEFAULT_GAMMA = 4


@dataclass(frozen=True)
class Discretization:
    alphas: np.ndarray
    betas: np.ndarray
    gammas: tuple[int, ...]

    def __post_init__(self):
        alphas = np.array(self.alphas, dtype=np.float64).reshape(-1)
        betas = np.array(self.betas, dtype=np.float64).reshape(-1)
        gammas = tuple(int(g) for g in self.gammas)
        if not (alphas.shape == betas.shape and len(gammas) == alphas.size):
            raise ValueError("alphas, betas and gammas must have one entry per attribute")
        if any(g < 1 for g in gammas):
            raise ValueError("every gamma must be >= 1")
        if np.any(betas < alphas):
            raise ValueError("beta must not be below alpha")
        alphas.setflags(write=False)
        betas.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "gammas", gammas)

    @property
    def m(self) -> int:
        return len(self.gammas)

    @property
    def gamma_total(self) -> int:
        return sum(self.gammas)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(o) for o in np.concatenate([[0], np.cumsum(self.gammas)[:-1]]))

    @property
    def constant(self) -> np.ndarray:
        """Boolean mask of attributes whose training range is a single value."""
        return self.betas == self.alphas

    def points(self, j: int) -> np.ndarray:
        """Characteristic points alpha_j = p_0 < ... < p_gamma = beta_j."""
        g = self.gammas[j]
        k = np.arange(g + 1)
        pts = self.alphas[j] + (k / g) * (self.betas[j] - self.alphas[j])
        pts[-1] = self.betas[j]
        return pts

    def block(self, j: int) -> slice:
        o = self.offsets[j]
        return slice(o, o + self.gammas[j])

    def attribute_of(self) -> np.ndarray:
        """Attribute index of every component of the encoded vector."""
        return np.repeat(np.arange(self.m), self.gammas)


def _gamma_tuple(gammas, m: int) -> tuple[int, ...]:
    if gammas is None:
        return (DEFAULT_GAMMA,) * m
    if np.isscalar(gammas):
        return (int(gammas),) * m
    gammas = tuple(int(g) for g in gammas)
    if len(gammas) == 1:
        return gammas * m
    if len(gammas) != m:
        raise ValueError(f"got {len(gammas)} gamma values for {m} attributes")
    return gammas


def build_discretization(train: Dataset, gammas: int | Sequence[int] | None = None) -> Discretization:
    """Grid over the training range of each attribute.

    ``gammas`` is one integer for every attribute or one per attribute.
    """
    g = _gamma_tuple(gammas, train.m)
    return Discretization(train.objects.min(axis=0), train.objects.max(axis=0), g)


def _encode_block(x: np.ndarray, pts: np.ndarray) -> np.ndarray:
    # x: (n,), pts: (g+1,) -> (n, g)
    lo, hi = pts[:-1], pts[1:]
    width = hi - lo
    xe = x[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = (xe - lo) / width
    out = np.where(xe > hi, 1.0, np.where((lo <= xe) & (xe <= hi), frac, 0.0))
    return out


def encode_dataset(ds, disc: Discretization) -> np.ndarray:
    """Encode every row; accepts a :class:`Dataset` or an (n, m) array."""
    X = ds.objects if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != disc.m:
        raise ValueError(f"expected rows with {disc.m} attributes, got shape {X.shape}")
    if np.isnan(X).any():
        raise ValueError("cannot encode NaN attribute values")
    out = np.zeros((X.shape[0], disc.gamma_total))
    for j in range(disc.m):
        if disc.constant[j]:
            continue
        out[:, disc.block(j)] = _encode_block(X[:, j], disc.points(j))
    return out


def encode(x, disc: Discretization) -> np.ndarray:
    """Attribute vector of one object (length ``gamma_total``, entries in [0, 1])."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (disc.m,):
        raise ValueError(f"expected {disc.m} attribute values, got shape {x.shape}")
    return encode_dataset(x[None, :], disc)[0]
