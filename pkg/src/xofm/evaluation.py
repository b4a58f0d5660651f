"""Accuracy/MAE, hyperparameter selection by k-fold CV, and repeated-split trials."""

from __future__ import annotations

import csv
import itertools
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset_io import Dataset, SplitSpec, kfold, random_split
from .inference import predicted_labels
from .training import Hyperparams, fit

logger = logging.getLogger(__name__)

DEFAULT_GAMMA_GRID = (2, 4, 6)
DEFAULT_TAU_GRID = (0.05, 0.1, 0.5)


@dataclass(frozen=True)
class Metrics:
    acc: float
    mae: float
    n: int


@dataclass(frozen=True)
class TrialSummary:
    trials: tuple[Metrics, ...]

    @property
    def acc_mean(self) -> float:
        return float(np.mean([t.acc for t in self.trials]))

    @property
    def mae_mean(self) -> float:
        return float(np.mean([t.mae for t in self.trials]))

    @property
    def acc_std(self) -> float:
        return _sample_std([t.acc for t in self.trials])

    @property
    def mae_std(self) -> float:
        return _sample_std([t.mae for t in self.trials])

    def summary_line(self) -> str:
        return (f"trials={len(self.trials)} acc={self.acc_mean:.4f}+-{self.acc_std:.4f} "
                f"mae={self.mae_mean:.4f}+-{self.mae_std:.4f}")


def _sample_std(values) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def _pair(pred, truth):
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} predictions vs {truth.shape} labels")
    if pred.size == 0:
        raise ValueError("no predictions")
    return pred, truth


def accuracy(pred, truth) -> float:
    pred, truth = _pair(pred, truth)
    return float(np.mean(pred == truth))


def mae(pred, truth) -> float:
    pred, truth = _pair(pred, truth)
    return float(np.mean(np.abs(pred - truth)))


def score_split(train: Dataset, test: Dataset, hp: Hyperparams) -> Metrics:
    model = fit(train, hp)
    pred = predicted_labels(test.objects, model)
    return Metrics(accuracy(pred, test.labels), mae(pred, test.labels), test.N)


def default_grid(base: Hyperparams = Hyperparams()) -> list[Hyperparams]:
    return [replace(base, gamma=g, tau=t) for g, t in itertools.product(DEFAULT_GAMMA_GRID, DEFAULT_TAU_GRID)]


def cross_validate(ds: Dataset, grid: Sequence[Hyperparams], n_folds: int = 5, seed: int = 0,
                   return_scores: bool = False, scorer=score_split):
    """Pick the grid point with the best mean validation accuracy.

    Ties go to the lower mean MAE, then to the earlier grid point. The same
    folds are used for every grid point. ``scorer(train, val, hp)`` returns
    the :class:`Metrics` of one fold.
    """
    if not grid:
        raise ValueError("empty hyperparameter grid")
    folds = kfold(ds, n_folds, seed)
    results = []
    for hp in grid:
        fold_metrics = [scorer(tr, va, hp) for tr, va in folds]
        acc = float(np.mean([f.acc for f in fold_metrics]))
        err = float(np.mean([f.mae for f in fold_metrics]))
        logger.info("cv gamma=%s tau=%s acc=%.4f mae=%.4f", hp.gamma, hp.tau, acc, err)
        results.append((acc, err))
    best = min(range(len(grid)), key=lambda i: (-results[i][0], results[i][1], i))
    if return_scores:
        return grid[best], results
    return grid[best]


def run_trials(ds: Dataset, hp: Hyperparams, spec: SplitSpec = SplitSpec()) -> TrialSummary:
    """Train/test on ``spec.n_trials`` seeded random splits.

    Each trial's split depends only on (spec.seed, trial); training uses
    ``hp.seed``.
    """
    trials = []
    for t in range(spec.n_trials):
        train, test = random_split(ds, spec, t)
        m = score_split(train, test, hp)
        logger.info("trial %d acc=%.4f mae=%.4f", t, m.acc, m.mae)
        trials.append(m)
    return TrialSummary(tuple(trials))


def write_trials_csv(summary: TrialSummary, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "acc", "mae"])
        for t, m in enumerate(summary.trials):
            w.writerow([t, repr(m.acc), repr(m.mae)])
