"""Class assignment by comparing a score with the cached training scores.

A new object's candidate labels run from the largest label among training
objects scoring no higher than it to the smallest label among those
scoring no lower. When that range holds more than one class, each
candidate h is rated by the share of other-class training objects that
agree with h at margin tau (lower classes beaten by more than tau, higher
classes ahead by more than tau), and the best-rated class wins.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encoding import encode_dataset
from .fm import ModelParams, scores


class InferenceError(ValueError):
    pass


@dataclass(frozen=True)
class ClassInterval:
    L: int
    R: int
    # set when the raw bounds crossed (L > R) and were swapped
    swapped: bool = False

    @property
    def singleton(self) -> bool:
        return self.L == self.R


@dataclass(frozen=True)
class Prediction:
    label: int
    interval: ClassInterval
    kappa_values: dict[int, float] = field(default_factory=dict)


def _cache(p: ModelParams):
    return np.asarray(p.train_scores, dtype=np.float64), np.asarray(p.train_labels, dtype=np.int64)


def raw_interval(score: float, train_scores, train_labels, H: int) -> tuple[int, int]:
    """Bounds (L, R) exactly as defined, without any repair; may have L > R."""
    below = train_labels[train_scores <= score]
    above = train_labels[train_scores >= score]
    L = max(1, int(below.max())) if below.size else 1
    R = min(H, int(above.min())) if above.size else H
    return L, R


def class_interval(score: float, p: ModelParams) -> ClassInterval:
    s, y = _cache(p)
    if s.size == 0:
        raise InferenceError("model has no cached training scores")
    L, R = raw_interval(score, s, y, p.n_classes)
    if L > R:
        return ClassInterval(R, L, swapped=True)
    return ClassInterval(L, R)


def kappa(score: float, h: int, p: ModelParams, tau: float | None = None) -> float:
    """Share of other-class training objects consistent with assigning class ``h``."""
    tau = p.tau if tau is None else tau
    s, y = _cache(p)
    if not 1 <= h <= p.n_classes:
        raise InferenceError(f"class {h} outside 1..{p.n_classes}")
    denom = int(np.count_nonzero(y != h))
    if denom == 0:
        raise InferenceError(f"every training object is in class {h}; indicator undefined")
    card = np.count_nonzero((y < h) & (score - s > tau)) + np.count_nonzero((y > h) & (s - score > tau))
    return card / denom


def predict_score(score: float, p: ModelParams) -> Prediction:
    interval = class_interval(score, p)
    if interval.singleton:
        return Prediction(interval.L, interval)
    values = {h: kappa(score, h, p) for h in range(interval.L, interval.R + 1)}
    # max() keeps the first maximal key, i.e. the smallest class on ties
    label = max(values, key=values.__getitem__)
    return Prediction(label, interval, values)


def predict(x, p: ModelParams) -> Prediction:
    """Predict the class of one raw attribute row."""
    x = np.asarray(x, dtype=np.float64)
    return predict_batch(x[None, :], p)[0]


def predict_batch(X, p: ModelParams) -> list[Prediction]:
    Phi = encode_dataset(np.asarray(X, dtype=np.float64), p.disc)
    return [predict_score(float(s), p) for s in scores(Phi, p.u, p.V)]


def predicted_labels(X, p: ModelParams) -> np.ndarray:
    return np.array([pr.label for pr in predict_batch(X, p)], dtype=np.int64)


def write_predictions(preds: list[Prediction], H: int, path) -> None:
    """CSV with row_id, L, R, chosen_label and kappa_1..kappa_H (blank outside [L, R])."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row_id", "L", "R", "chosen_label"] + [f"kappa_{h}" for h in range(1, H + 1)])
        for row_id, pr in enumerate(preds):
            kap = ["" if h not in pr.kappa_values else repr(float(pr.kappa_values[h])) for h in range(1, H + 1)]
            w.writerow([row_id, pr.interval.L, pr.interval.R, pr.label] + kap)
