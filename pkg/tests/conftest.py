import os
from pathlib import Path

import numpy as np
import pytest

from xofm.dataset_io import Dataset, load_csv

BREAST_COLUMNS = ("I0", "PA500", "HFS", "DA", "Area", "A/DA", "Max IP", "DR", "P")
BREAST_PATHS = [os.environ.get("XOFM_BREAST_CSV", ""), Path(__file__).parent / "data" / "breast.csv"]


def breast_path():
    for p in BREAST_PATHS:
        if p and Path(p).is_file():
            return Path(p)
    return None


@pytest.fixture(scope="session")
def breast_ds():
    """The UCI Breast Tissue data with integer labels, or a skip if absent."""
    path = breast_path()
    if path is None:
        pytest.skip("UCI Breast Tissue CSV not found (set XOFM_BREAST_CSV or add tests/data/breast.csv)")
    return load_csv(path)


def separable_dataset(n=60, seed=0):
    """Two attributes, three classes cut from x1 + x2 with empty gaps around the cuts."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    while len(rows) < n:
        x = rng.uniform(0.0, 10.0, size=2)
        s = x.sum()
        if abs(s - 7.0) < 1.0 or abs(s - 13.0) < 1.0:
            continue
        rows.append(x)
        labels.append(1 + int(s > 7.0) + int(s > 13.0))
    return Dataset(np.array(rows), np.array(labels), ("x1", "x2"), 3)


def breast_shaped_dataset(seed=0):
    """Random 106 x 9, 6-class data with the Breast Tissue column names."""
    rng = np.random.default_rng(seed)
    X = rng.lognormal(mean=2.0, sigma=1.0, size=(106, 9))
    w = rng.normal(size=9)
    z = (np.log(X) - 2.0) @ w + rng.normal(scale=0.5, size=106)
    y = np.searchsorted(np.quantile(z, [1 / 6, 2 / 6, 3 / 6, 4 / 6, 5 / 6]), z) + 1
    return Dataset(X, y, BREAST_COLUMNS, 6)


@pytest.fixture
def separable():
    return separable_dataset()


@pytest.fixture(scope="session")
def breast_like():
    return breast_shaped_dataset()


def write_csv(path, ds: Dataset):
    lines = [",".join(list(ds.attr_names) + ["label"])]
    for x, y in zip(ds.objects, ds.labels):
        lines.append(",".join([repr(float(v)) for v in x] + [str(int(y))]))
    Path(path).write_text("\n".join(lines) + "\n")
    return path


# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        status, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
