"""Factorization-machine link function and the model container.

The score of an encoded object ``phi`` is

    U(phi) = u . phi + sum_{a < b} <v_a, v_b> phi_a phi_b

with no global bias: only score differences between objects are ever used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encoding import Discretization

FORMAT_VERSION = "1"


class ModelFormatError(ValueError):
    """Raised for malformed or incompatible model documents."""


@dataclass
class ModelParams:
    """Trained (or initial) parameters of one model.

    Attributes
    ----------
    u : (gamma,) array
        Marginal score increments, one per sub-interval.
    V : (gamma, k) array
        Factor vectors, one row per sub-interval.
    tau : float
        Margin used in training and by the class-assignment indicator.
    disc : Discretization
    attr_names : tuple of str
    n_classes : int
        H, the number of ordered classes.
    train_scores, train_labels : arrays
        Scores and labels of the training objects under the final
        parameters; inference compares new scores against these.
    monotone : tuple of bool
        Attributes trained under the non-decreasing constraint.
    """

    u: np.ndarray
    V: np.ndarray
    tau: float
    disc: Discretization
    attr_names: tuple[str, ...]
    n_classes: int
    train_scores: np.ndarray = field(default_factory=lambda: np.zeros(0))
    train_labels: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    monotone: tuple[bool, ...] = ()

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.float64)
        self.V = np.asarray(self.V, dtype=np.float64)
        if self.V.ndim != 2 or self.V.shape[1] < 1:
            raise ValueError("V must be a (gamma, k) matrix with k >= 1")
        if self.u.shape != (self.V.shape[0],) or self.u.size != self.disc.gamma_total:
            raise ValueError(
                f"u has shape {self.u.shape}, V {self.V.shape}; both need gamma={self.disc.gamma_total} rows"
            )
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        self.train_scores = np.asarray(self.train_scores, dtype=np.float64)
        self.train_labels = np.asarray(self.train_labels, dtype=np.int64)
        if self.train_scores.shape != self.train_labels.shape:
            raise ValueError("train_scores and train_labels differ in length")
        self.attr_names = tuple(self.attr_names)
        if not self.monotone:
            self.monotone = (False,) * self.disc.m
        self.monotone = tuple(bool(b) for b in self.monotone)

    @property
    def k(self) -> int:
        return self.V.shape[1]

    @property
    def gamma(self) -> int:
        return self.u.size


def _check_dim(phi, p: ModelParams) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != (p.gamma,):
        raise ValueError(f"attribute vector has shape {phi.shape}, model expects ({p.gamma},)")
    return phi


def link_score(phi, p: ModelParams) -> float:
    """Score by the defining double sum over component pairs (quadratic in gamma)."""
    phi = _check_dim(phi, p)
    total = float(p.u @ phi)
    g = p.gamma
    for a in range(g):
        for b in range(a + 1, g):
            total += float(p.V[a] @ p.V[b]) * phi[a] * phi[b]
    return total


def link_score_fast(phi, p: ModelParams) -> float:
    """Score in O(gamma k) via the sum-of-squares identity."""
    phi = _check_dim(phi, p)
    return float(scores(phi[None, :], p.u, p.V)[0])


def scores(Phi: np.ndarray, u: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Vectorized link scores of the rows of an encoded matrix."""
    q = Phi @ V
    q2 = (Phi * Phi) @ (V * V)
    return Phi @ u + 0.5 * (q * q - q2).sum(axis=1)


def _floats(a) -> list:
    return [float(x) for x in np.asarray(a).reshape(-1)]


def model_to_dict(p: ModelParams) -> dict:
    return {
        "version": FORMAT_VERSION,
        "k": p.k,
        "tau": float(p.tau),
        "gammas": list(p.disc.gammas),
        "alphas": _floats(p.disc.alphas),
        "betas": _floats(p.disc.betas),
        "u": _floats(p.u),
        "V": _floats(p.V),
        "train_scores": _floats(p.train_scores),
        "train_labels": [int(y) for y in p.train_labels],
        "attr_names": list(p.attr_names),
        "n_classes": int(p.n_classes),
        "monotone": list(p.monotone),
    }


def model_from_dict(doc: dict) -> ModelParams:
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {version!r}; expected {FORMAT_VERSION!r}")
    required = ("k", "tau", "gammas", "alphas", "betas", "u", "V", "train_scores", "train_labels", "attr_names")
    missing = [key for key in required if key not in doc]
    if missing:
        raise ModelFormatError(f"model document lacks section(s): {', '.join(missing)}")
    try:
        disc = Discretization(doc["alphas"], doc["betas"], doc["gammas"])
        k = int(doc["k"])
        V = np.asarray(doc["V"], dtype=np.float64)
        if V.size != disc.gamma_total * k:
            raise ModelFormatError(f"V has {V.size} entries, expected {disc.gamma_total}x{k}")
        labels = [int(y) for y in doc["train_labels"]]
        n_classes = int(doc.get("n_classes", max(labels, default=2)))
        return ModelParams(
            u=doc["u"],
            V=V.reshape(disc.gamma_total, k),
            tau=float(doc["tau"]),
            disc=disc,
            attr_names=tuple(doc["attr_names"]),
            n_classes=n_classes,
            train_scores=doc["train_scores"],
            train_labels=labels,
            monotone=tuple(doc.get("monotone", ())),
        )
    except ModelFormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc


def save_model(p: ModelParams, path) -> None:
    # json writes floats with repr(), which round-trips float64 exactly
    Path(path).write_text(json.dumps(model_to_dict(p), indent=1) + "\n", encoding="utf-8")


def load_model(path) -> ModelParams:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(doc)
