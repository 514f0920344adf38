import os

import numpy as np
import pytest

from schoenberg import datasets as ds
from schoenberg import transforms as tr

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_cloud(rng, n_max=25, p_max=5, n_min=2):
    n = int(rng.integers(n_min, n_max + 1))
    p = int(rng.integers(1, p_max + 1))
    scale = 10.0 ** rng.uniform(-1, 1)
    return scale * rng.standard_normal((n, p))


def random_signed(rng, n):
    a = rng.uniform(-1, 2, n)
    while abs(a.sum()) < 0.1:
        a = rng.uniform(-1, 2, n)
    return a / a.sum()


def random_weights(rng, n):
    f = rng.uniform(0.05, 1.0, n)
    return f / f.sum()


CATALOG = [
    tr.identity(),
    tr.gaussian(0.65),
    tr.gaussian(5.0),
    tr.power(0.4),
    tr.power(0.5),
    tr.log(1.0),
    tr.log(0.2),
    tr.rational(1.0),
    tr.truncsine(),
    tr.powrational(0.5),
    tr.scaledexp(1.0),
    tr.scaledexp(0.0),
    tr.compose(tr.rational(1.0), tr.power(0.5)),
    tr.compose(tr.gaussian(1.0), tr.log(1.0)),
]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def iris_csv(tmp_path_factory):
    """Iris in the x1..x4,label layout.

    Uses the file named by SCHOENBERG_IRIS_CSV when set, otherwise writes
    one from the copy shipped with scikit-learn.
    """
    path = os.environ.get("SCHOENBERG_IRIS_CSV")
    if path:
        return path
    datasets = pytest.importorskip("sklearn.datasets")
    iris = datasets.load_iris()
    out = tmp_path_factory.mktemp("iris") / "iris.csv"
    ds.write_csv(out, iris.data, iris.target + 1)
    return str(out)
