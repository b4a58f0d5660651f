"""Per-attribute score functions and sub-interval interaction grids."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fm import ModelParams


@dataclass(frozen=True)
class ScoreFunctionTable:
    attribute: str
    breakpoints: np.ndarray
    scores: np.ndarray

    @property
    def importance(self) -> float:
        """Spread of the score function (max minus min)."""
        return float(self.scores.max() - self.scores.min())

    def __call__(self, x):
        """Piecewise-linear interpolation, flat outside the training range."""
        if self.breakpoints[-1] == self.breakpoints[0]:
            return np.zeros_like(np.asarray(x, dtype=np.float64))
        return np.interp(x, self.breakpoints, self.scores)


@dataclass(frozen=True)
class InteractionMatrix:
    attributes: tuple[str, str]
    pair: tuple[int, int]
    grid: np.ndarray


def _check_attr(p: ModelParams, j: int) -> int:
    if not 0 <= j < p.disc.m:
        raise IndexError(f"attribute index {j} outside 0..{p.disc.m - 1}")
    return j


def attribute_index(p: ModelParams, name_or_index) -> int:
    if isinstance(name_or_index, (int, np.integer)):
        return _check_attr(p, int(name_or_index))
    try:
        return p.attr_names.index(name_or_index)
    except ValueError:
        raise KeyError(f"unknown attribute {name_or_index!r}") from None


def score_function(p: ModelParams, j: int) -> ScoreFunctionTable:
    j = _check_attr(p, j)
    increments = p.u[p.disc.block(j)]
    return ScoreFunctionTable(
        attribute=p.attr_names[j],
        breakpoints=p.disc.points(j),
        scores=np.concatenate([[0.0], np.cumsum(increments)]),
    )


def interaction_matrix(p: ModelParams, j1: int, j2: int) -> InteractionMatrix:
    """Dot products of the factor rows of every sub-interval pair of two attributes."""
    j1, j2 = _check_attr(p, j1), _check_attr(p, j2)
    if j1 == j2:
        raise ValueError("interaction grid needs two distinct attributes")
    grid = p.V[p.disc.block(j1)] @ p.V[p.disc.block(j2)].T
    return InteractionMatrix((p.attr_names[j1], p.attr_names[j2]), (j1, j2), grid)


def build_report(p: ModelParams, pairs=()) -> dict:
    functions = [score_function(p, j) for j in range(p.disc.m)]
    grids = [interaction_matrix(p, attribute_index(p, a), attribute_index(p, b)) for a, b in pairs]
    return {
        "score_functions": [
            {
                "attribute": t.attribute,
                "breakpoints": [float(x) for x in t.breakpoints],
                "scores": [float(x) for x in t.scores],
                "importance": t.importance,
            }
            for t in functions
        ],
        "interactions": [
            {
                "attributes": list(g.attributes),
                "intervals1": [float(x) for x in p.disc.points(g.pair[0])],
                "intervals2": [float(x) for x in p.disc.points(g.pair[1])],
                "grid": [[float(x) for x in row] for row in g.grid],
            }
            for g in grids
        ],
    }


def export_report(p: ModelParams, path, pairs=()) -> list[Path]:
    """Write the report as JSON at ``path`` plus two long-format CSV files.

    ``pairs`` holds attribute (name or index) pairs whose grids to include.
    The CSVs sit next to ``path`` as ``<stem>_scores.csv`` and
    ``<stem>_interactions.csv``. Returns the written paths.
    """
    path = Path(path)
    report = build_report(p, pairs)
    path.write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")

    scores_csv = path.with_name(path.stem + "_scores.csv")
    with scores_csv.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["attribute", "breakpoint", "score"])
        for t in report["score_functions"]:
            for b, s in zip(t["breakpoints"], t["scores"]):
                w.writerow([t["attribute"], repr(b), repr(s)])

    inter_csv = path.with_name(path.stem + "_interactions.csv")
    with inter_csv.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["attr1", "attr2", "interval1", "interval2", "strength"])
        for g in report["interactions"]:
            a, b = g["attributes"]
            for n1, row in enumerate(g["grid"], start=1):
                for n2, v in enumerate(row, start=1):
                    w.writerow([a, b, n1, n2, repr(v)])
    return [path, scores_csv, inter_csv]


def load_report(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
