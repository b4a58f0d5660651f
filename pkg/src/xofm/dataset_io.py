"""Loading, validating, splitting and folding tabular ordinal datasets."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised when an input file or dataset violates the expected schema."""


@dataclass(frozen=True)
class Dataset:
    """N objects with m real attributes and ordinal labels in 1..H.

    ``objects`` is an (N, m) float64 array, ``labels`` an (N,) int array.
    Both arrays are made read-only on construction.
    """

    objects: np.ndarray
    labels: np.ndarray
    attr_names: tuple[str, ...]
    H: int

    def __post_init__(self):
        objects = np.array(self.objects, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64)
        if objects.ndim != 2:
            raise DataError("objects must be a 2-D array")
        n, m = objects.shape
        if labels.shape != (n,):
            raise DataError(f"expected {n} labels, got {labels.shape}")
        if m < 1:
            raise DataError("at least one attribute is required")
        if len(self.attr_names) != m:
            raise DataError(f"expected {m} attribute names, got {len(self.attr_names)}")
        if self.H < 2:
            raise DataError(f"H must be at least 2, got {self.H}")
        if not np.all(np.isfinite(objects)):
            r, c = np.argwhere(~np.isfinite(objects))[0]
            raise DataError(f"non-finite attribute value at row {r}, column {self.attr_names[c]!r}")
        if n and (labels.min() < 1 or labels.max() > self.H):
            raise DataError(f"labels must lie in 1..{self.H}")
        objects.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "attr_names", tuple(self.attr_names))

    @property
    def N(self) -> int:
        return self.objects.shape[0]

    @property
    def m(self) -> int:
        return self.objects.shape[1]

    def subset(self, rows) -> Dataset:
        """Rows ``rows`` of this dataset, keeping H and attribute names."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.objects[rows], self.labels[rows], self.attr_names, self.H)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    n_trials: int = 30
    n_folds: int = 5

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.n_folds < 2:
            raise ValueError("n_folds must be >= 2")


def _parse_real(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"non-numeric value {cell!r} at row {row}, column {column!r}") from None
    if not math.isfinite(value):
        raise DataError(f"non-finite value {cell!r} at row {row}, column {column!r}")
    return value


def _read_table(path) -> tuple[list[str], list[list[str]]]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = [r for r in reader if any(c.strip() for c in r)]
    for r, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise DataError(f"row {r}: expected {len(header)} cells, got {len(row)}")
    return header, rows


def _resolve_column(header: list[str], column) -> int:
    if isinstance(column, int):
        if not -len(header) <= column < len(header):
            raise DataError(f"label column index {column} out of range")
        return column % len(header)
    if column in header:
        return header.index(column)
    if isinstance(column, str) and column.lstrip("-").isdigit():
        return _resolve_column(header, int(column))
    raise DataError(f"label column {column!r} not found in header {header}")


def load_csv(path, label_column="label") -> Dataset:
    """Read a headered CSV into a :class:`Dataset`.

    Every column other than ``label_column`` (a header name or a column
    index) is an attribute. Labels are kept as given; H is the largest
    label. Row numbers in error messages count data rows from 1.
    """
    header, rows = _read_table(path)
    li = _resolve_column(header, label_column)
    attr_cols = [c for c in range(len(header)) if c != li]
    if not attr_cols:
        raise DataError("no attribute columns")
    if len(rows) < 2:
        raise DataError(f"at least 2 data rows required, got {len(rows)}")

    objects = np.empty((len(rows), len(attr_cols)))
    labels = np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows, start=1):
        cell = row[li].strip()
        try:
            label = int(cell)
        except ValueError:
            try:
                as_float = float(cell)
            except ValueError:
                as_float = math.nan
            if not as_float.is_integer():
                raise DataError(f"non-integer label {cell!r} at row {r}") from None
            label = int(as_float)
        if label < 1:
            raise DataError(f"label below 1 at row {r}")
        labels[r - 1] = label
        for a, c in enumerate(attr_cols):
            objects[r - 1, a] = _parse_real(row[c].strip(), r, header[c])
    H = int(labels.max())
    if H < 2:
        raise DataError("labels span a single class; H must be at least 2")
    return Dataset(objects, labels, tuple(header[c] for c in attr_cols), H)


def load_attributes(path, attr_names) -> np.ndarray:
    """Read only the columns ``attr_names`` (in that order) from a CSV.

    Used at prediction time, where the label column may be absent.
    """
    header, rows = _read_table(path)
    missing = [a for a in attr_names if a not in header]
    if missing:
        raise DataError(f"missing attribute columns: {', '.join(missing)}")
    cols = [header.index(a) for a in attr_names]
    out = np.empty((len(rows), len(cols)))
    for r, row in enumerate(rows, start=1):
        for a, c in enumerate(cols):
            out[r - 1, a] = _parse_real(row[c].strip(), r, header[c])
    return out


def _train_size(n: int, fraction: float) -> int:
    return int(math.floor(fraction * n + 0.5))


def split_indices(n: int, spec: SplitSpec, trial: int, attempt: int = 0):
    """Index arrays (train, test) for one trial; a pure function of its inputs."""
    if not 0 <= trial < spec.n_trials:
        raise ValueError(f"trial must lie in 0..{spec.n_trials - 1}")
    rng = np.random.default_rng([spec.seed, trial, attempt])
    perm = rng.permutation(n)
    n_train = _train_size(n, spec.train_fraction)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def random_split(ds: Dataset, spec: SplitSpec, trial: int, max_attempts: int = 10):
    """Uniform random train/test partition for ``trial``.

    If the training part would hold a single class, the split is redrawn
    with the next sub-seed, at most ``max_attempts`` times in total.
    """
    for attempt in range(max_attempts):
        train_idx, test_idx = split_indices(ds.N, spec, trial, attempt)
        if np.unique(ds.labels[train_idx]).size >= 2:
            break
    return ds.subset(train_idx), ds.subset(test_idx)


def fold_indices(n: int, n_folds: int, seed: int) -> list[np.ndarray]:
    """Validation index sets of ``n_folds`` near-equal folds (larger folds first)."""
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    if n_folds > n:
        raise ValueError(f"n_folds={n_folds} exceeds the number of rows {n}")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(f) for f in np.array_split(perm, n_folds)]


def kfold(ds: Dataset, n_folds: int, seed: int) -> list[tuple[Dataset, Dataset]]:
    folds = fold_indices(ds.N, n_folds, seed)
    out = []
    for k, val in enumerate(folds):
        train = np.sort(np.concatenate([f for i, f in enumerate(folds) if i != k]))
        out.append((ds.subset(train), ds.subset(val)))
    return out


BREAST_TISSUE_ORDER = ("adi", "con", "gla", "mas", "fad", "car")


def recode_breast_tissue(src, dst, class_column="Class"):
    """Convert the UCI Breast Tissue table (exported to CSV) to integer labels.

    Classes are ordered adipose < connective < glandular < mastopathy <
    fibro-adenoma < carcinoma and coded 1..6 in a ``label`` column. A
    ``Case #`` column, if present, is dropped.
    """
    header, rows = _read_table(src)
    ci = _resolve_column(header, class_column)
    keep = [c for c in range(len(header)) if c != ci and header[c].lower().replace(" ", "") != "case#"]
    codes = {name: i + 1 for i, name in enumerate(BREAST_TISSUE_ORDER)}
    with Path(dst).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([header[c] for c in keep] + ["label"])
        for r, row in enumerate(rows, start=1):
            cls = row[ci].strip().lower()
            if cls not in codes:
                raise DataError(f"unknown class {row[ci]!r} at row {r}")
            w.writerow([row[c].strip() for c in keep] + [codes[cls]])
