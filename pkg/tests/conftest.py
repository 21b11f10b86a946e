import os

import numpy as np
import pytest

from ppsonet import datapipe

# criterion label -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


def record(label, passed, detail=""):
    ACCEPTANCE[label] = (bool(passed), detail)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=_criterion_order):
        passed, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())


def _criterion_order(label):
    head = label.split()[0]
    digits = head.rstrip("abcdefghijklmnopqrstuvwxyz")
    return (int(digits) if digits.isdigit() else 99, label)


def _write_sklearn(loader, path):
    bunch = loader()
    names = [str(n) for n in bunch.target_names]
    ds = datapipe.Dataset(path.stem, np.asarray(bunch.data, dtype=float),
                          np.asarray(bunch.target, dtype=np.int64), tuple(names))
    datapipe.save_csv(ds, path)
    return str(path)


@pytest.fixture(scope="session")
def uci_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("uci")


@pytest.fixture(scope="session")
def iris_csv(uci_dir):
    sk = pytest.importorskip("sklearn.datasets")
    return _write_sklearn(sk.load_iris, uci_dir / "iris.csv")


@pytest.fixture(scope="session")
def wine_csv(uci_dir):
    sk = pytest.importorskip("sklearn.datasets")
    return _write_sklearn(sk.load_wine, uci_dir / "wine.csv")


@pytest.fixture(scope="session")
def cancer_csv(uci_dir):
    sk = pytest.importorskip("sklearn.datasets")
    return _write_sklearn(sk.load_breast_cancer, uci_dir / "cancer.csv")


def banknote_path():
    """Banknote authentication is not shipped with scikit-learn; point at a local copy."""
    env = os.environ.get("PPSONET_BANKNOTE_CSV")
    if env:
        return env
    local = os.path.join(os.path.dirname(__file__), "data", "banknote.csv")
    return local if os.path.exists(local) else None


@pytest.fixture
def toy_csv(tmp_path):
    """Two well separated Gaussian blobs, 40 rows each."""
    rng = np.random.default_rng(5)
    x = np.vstack([rng.normal(-2, 0.5, (40, 2)), rng.normal(2, 0.5, (40, 2))])
    y = np.repeat([0, 1], 40)
    ds = datapipe.Dataset("toy", x, y, ("neg", "pos"))
    path = tmp_path / "toy.csv"
    datapipe.save_csv(ds, path)
    return str(path)
