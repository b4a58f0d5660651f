"""Pairwise squared-hinge loss, its gradients, and SGD training.

For every training pair (i, j) with y_i > y_j the residual is
r = U(x_j) - U(x_i) + tau and the pair contributes max(0, r)^2 / 2 to the
loss. L2 penalties lambda1 * |u|^2 + lambda2 * |V|_F^2 are added on top.

SGD visits every pair once per epoch in a seeded shuffled order and moves
all parameters by eta * (d l^2 / d theta + 2 lambda theta), i.e. the
penalty gradient is applied at every pair update.

The monotone variant writes u = u'^2 for constrained attributes, descends
on u', and clips the factor rows of constrained attributes at zero after
every update, which keeps score functions non-decreasing and their
pairwise interactions non-negative.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numba
import numpy as np

from .dataset_io import Dataset
from .encoding import DEFAULT_GAMMA, Discretization, build_discretization, encode_dataset
from .fm import ModelParams, scores

logger = logging.getLogger(__name__)

MONOTONE_ROOT_INIT = 0.01


class TrainingError(RuntimeError):
    """Raised when a training set cannot produce any ordered pair."""


@dataclass(frozen=True)
class Hyperparams:
    tau: float = 0.1
    eta: float = 0.01
    iters: int = 100
    lambda1: float = 0.0
    lambda2: float = 0.0
    k: int = 5
    sigma: float = 0.1
    seed: int = 0
    gamma: int | tuple[int, ...] = DEFAULT_GAMMA
    # True: every attribute, False: none, or one flag per attribute
    monotone: bool | tuple[bool, ...] = False

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if self.iters < 0:
            raise ValueError("iters must be non-negative")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("regularization weights must be non-negative")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not isinstance(self.monotone, bool):
            object.__setattr__(self, "monotone", tuple(bool(b) for b in self.monotone))
        if not isinstance(self.gamma, int):
            object.__setattr__(self, "gamma", tuple(int(g) for g in self.gamma))

    def monotone_flags(self, m: int) -> tuple[bool, ...]:
        if isinstance(self.monotone, bool):
            return (self.monotone,) * m
        if len(self.monotone) != m:
            raise ValueError(f"got {len(self.monotone)} monotone flags for {m} attributes")
        return self.monotone


class PairSet(NamedTuple):
    """Index pairs (i[t], j[t]) with labels[i[t]] > labels[j[t]]."""

    i: np.ndarray
    j: np.ndarray

    def __len__(self):
        return self.i.size


def make_pairs(labels) -> PairSet:
    labels = np.asarray(labels)
    ii, jj = np.nonzero(labels[:, None] > labels[None, :])
    return PairSet(ii.astype(np.int64), jj.astype(np.int64))


def _residuals(p: ModelParams, pairs: PairSet, encoded, tau) -> np.ndarray:
    s = scores(encoded, p.u, p.V)
    return s[pairs.j] - s[pairs.i] + tau


def pairwise_loss(p: ModelParams, pairs: PairSet, encoded, hp: Hyperparams) -> float:
    """Half the summed squared hinge over ``pairs`` plus the L2 penalties."""
    penalty = hp.lambda1 * float(p.u @ p.u) + hp.lambda2 * float(np.sum(p.V * p.V))
    if len(pairs) == 0:
        warnings.warn("empty pair set: the ranking loss is zero", RuntimeWarning, stacklevel=2)
        return penalty
    r = np.maximum(_residuals(p, pairs, encoded, hp.tau), 0.0)
    return 0.5 * float(r @ r) + penalty


def score_gradient(phi, V) -> tuple[np.ndarray, np.ndarray]:
    """Derivatives of U at one encoded object with respect to u and V."""
    phi = np.asarray(phi, dtype=np.float64)
    q = phi @ V
    return phi.copy(), phi[:, None] * q[None, :] - V * (phi * phi)[:, None]


def pair_gradient(p: ModelParams, pair, encoded, hp: Hyperparams) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of the squared hinge l^2 of one pair (i, j) over (u, V).

    Exact zeros when the pair already clears the margin.
    """
    i, j = pair
    phi_i, phi_j = encoded[i], encoded[j]
    s_i = float(scores(phi_i[None], p.u, p.V)[0])
    s_j = float(scores(phi_j[None], p.u, p.V)[0])
    if s_i - s_j - hp.tau >= 0:
        return np.zeros_like(p.u), np.zeros_like(p.V)
    r = s_j - s_i + hp.tau
    gu_i, gV_i = score_gradient(phi_i, p.V)
    gu_j, gV_j = score_gradient(phi_j, p.V)
    return 2.0 * r * (gu_j - gu_i), 2.0 * r * (gV_j - gV_i)


def loss_gradient(p: ModelParams, pairs: PairSet, encoded, hp: Hyperparams) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of :func:`pairwise_loss` (all pairs plus penalties)."""
    gu = 2.0 * hp.lambda1 * p.u
    gV = 2.0 * hp.lambda2 * p.V
    if len(pairs) == 0:
        return gu, gV
    r = np.maximum(_residuals(p, pairs, encoded, hp.tau), 0.0)
    # weight per object: sum of r over pairs where it is the lower (+) or upper (-) object
    w = np.zeros(encoded.shape[0])
    np.add.at(w, pairs.j, r)
    np.add.at(w, pairs.i, -r)
    gu = gu + encoded.T @ w
    q = encoded @ p.V
    gV = gV + (encoded * w[:, None]).T @ q - p.V * ((encoded * encoded).T @ w)[:, None]
    return gu, gV


@numba.njit(cache=True)
def _sgd_epoch(Phi, pi, pj, order, u, root, V, tau, eta, lam1, lam2, mono_u, mono_v, frozen):
    g, k = V.shape
    q_i = np.empty(k)
    q_j = np.empty(k)
    for t in order:
        i = pi[t]
        j = pj[t]
        s_i = 0.0
        s_j = 0.0
        for f in range(k):
            a = 0.0
            b = 0.0
            a2 = 0.0
            b2 = 0.0
            for n in range(g):
                vi = V[n, f] * Phi[i, n]
                vj = V[n, f] * Phi[j, n]
                a += vi
                b += vj
                a2 += vi * vi
                b2 += vj * vj
            q_i[f] = a
            q_j[f] = b
            s_i += 0.5 * (a * a - a2)
            s_j += 0.5 * (b * b - b2)
        for n in range(g):
            s_i += u[n] * Phi[i, n]
            s_j += u[n] * Phi[j, n]
        r = s_j - s_i + tau
        active = not (s_i - s_j - tau >= 0.0)
        c = 2.0 * r if active else 0.0
        for n in range(g):
            if frozen[n]:
                continue
            xi = Phi[i, n]
            xj = Phi[j, n]
            gu = c * (xj - xi)
            if mono_u[n]:
                root[n] -= eta * (2.0 * root[n] * (gu + 2.0 * lam1 * u[n]))
                u[n] = root[n] * root[n]
            else:
                u[n] -= eta * (gu + 2.0 * lam1 * u[n])
            for f in range(k):
                v = V[n, f]
                gv = c * ((xj * q_j[f] - v * xj * xj) - (xi * q_i[f] - v * xi * xi))
                v -= eta * (gv + 2.0 * lam2 * v)
                if mono_v[n] and v <= 0.0:
                    v = 0.0
                V[n, f] = v


def _resolve_gammas(hp: Hyperparams, m: int):
    return hp.gamma if not isinstance(hp.gamma, int) else (hp.gamma,) * m


def _fit(train: Dataset, hp: Hyperparams, flags: Sequence[bool], disc: Discretization | None = None) -> ModelParams:
    if np.unique(train.labels).size < 2:
        raise TrainingError("training set holds a single class; no ordered pairs exist")
    if disc is None:
        disc = build_discretization(train, _resolve_gammas(hp, train.m))
    Phi = encode_dataset(train, disc)
    pairs = make_pairs(train.labels)

    attr = disc.attribute_of()
    frozen = disc.constant[attr]
    mono = np.asarray(flags, dtype=bool)[attr] & ~frozen

    rng = np.random.default_rng(hp.seed)
    V = rng.normal(0.0, hp.sigma, size=(disc.gamma_total, hp.k))
    V[frozen] = 0.0
    V[mono] = np.maximum(V[mono], 0.0)
    root = np.where(mono, MONOTONE_ROOT_INIT, 0.0)
    u = root * root

    for _ in range(hp.iters):
        order = rng.permutation(len(pairs))
        _sgd_epoch(Phi, pairs.i, pairs.j, order, u, root, V, hp.tau, hp.eta,
                   hp.lambda1, hp.lambda2, mono, mono, frozen)

    p = ModelParams(
        u=u, V=V, tau=hp.tau, disc=disc, attr_names=train.attr_names, n_classes=train.H,
        train_scores=scores(Phi, u, V), train_labels=train.labels.copy(), monotone=tuple(flags),
    )
    logger.debug("trained on %d objects, %d pairs, loss %.6g", train.N, len(pairs),
                 pairwise_loss(p, pairs, Phi, hp))
    return p


def train_sgd(train: Dataset, hp: Hyperparams = Hyperparams(), disc: Discretization | None = None) -> ModelParams:
    """Unconstrained SGD; ``hp.monotone`` is ignored.

    ``disc`` overrides the grid built from ``train`` and ``hp.gamma``.
    """
    return _fit(train, hp, (False,) * train.m, disc)


def train_monotone(train: Dataset, hp: Hyperparams = Hyperparams(monotone=True),
                   disc: Discretization | None = None) -> ModelParams:
    """SGD with non-decreasing score functions for the attributes flagged in ``hp.monotone``."""
    return _fit(train, hp, hp.monotone_flags(train.m), disc)


def fit(train: Dataset, hp: Hyperparams = Hyperparams()) -> ModelParams:
    """Train with the monotone variant iff any attribute is flagged."""
    if any(hp.monotone_flags(train.m)):
        return train_monotone(train, hp)
    return train_sgd(train, hp)


def training_loss(p: ModelParams, train: Dataset, hp: Hyperparams) -> float:
    Phi = encode_dataset(train, p.disc)
    return pairwise_loss(p, make_pairs(train.labels), Phi, hp)
