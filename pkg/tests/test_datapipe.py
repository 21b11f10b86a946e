import numpy as np
import pytest

from ppsonet import datapipe
from ppsonet.errors import DataError, FormatError, MissingValueError, ParseError, StratificationError


def _write(tmp_path, text, name="d.csv"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _dataset(counts):
    labels = np.repeat(np.arange(len(counts)), counts)
    feats = np.arange(labels.size, dtype=float)[:, None]
    return datapipe.Dataset("t", feats, labels, tuple(f"c{i}" for i in range(len(counts))))


def test_first_appearance_labels(tmp_path):
    ds = datapipe.load_csv(_write(tmp_path, "1,2,A\n3,4,B\n5,6,A\n"))
    assert ds.labels.tolist() == [0, 1, 0]
    assert ds.class_names == ("A", "B") and ds.n_classes == 2


def test_header_detection_and_label_column(tmp_path):
    ds = datapipe.load_csv(_write(tmp_path, "cls,f1,f2\nx,1,2\ny,3,4\n"), label_column=0)
    assert ds.features.tolist() == [[1, 2], [3, 4]]
    assert ds.class_names == ("x", "y")


def test_iris_shape(iris_csv):
    ds = datapipe.load_csv(iris_csv)
    assert (ds.n_samples, ds.n_features, ds.n_classes) == (150, 4, 3)


def test_missing_value_names_position(tmp_path):
    with pytest.raises(MissingValueError, match="row 2, column 2"):
        datapipe.load_csv(_write(tmp_path, "1,2,A\n3,,B\n"))


def test_format_and_parse_errors(tmp_path):
    with pytest.raises(FormatError, match="row 2"):
        datapipe.load_csv(_write(tmp_path, "1,2,A\n3,B\n"))
    with pytest.raises(ParseError):
        datapipe.load_csv(_write(tmp_path, "1,2,A\n3,abc,B\n"))
    with pytest.raises(FormatError):
        datapipe.load_csv(_write(tmp_path, ""))
    with pytest.raises(DataError):
        datapipe.load_csv(_write(tmp_path, "1,2,A\n3,4,A\n"))


def test_save_load_round_trip(tmp_path):
    ds = _dataset([3, 4])
    path = tmp_path / "rt.csv"
    datapipe.save_csv(ds, path)
    back = datapipe.load_csv(str(path))
    np.testing.assert_array_equal(back.features, ds.features)
    np.testing.assert_array_equal(back.labels, ds.labels)


@pytest.mark.parametrize("column,expected", [([0, 5, 10], [-1, 0, 1]), ([7, 7, 7], [0, 0, 0]),
                                             ([2, 4], [-1, 1])])
def test_normalize_examples(column, expected):
    ds = datapipe.Dataset("n", np.array(column, float)[:, None], np.zeros(len(column), np.int64), ("a",))
    np.testing.assert_allclose(datapipe.normalize(ds).features[:, 0], expected)


def test_train_scaler_clips_test_rows():
    scaler = datapipe.MinMaxScaler.fit(np.array([[0.0], [10.0]]))
    np.testing.assert_array_equal(scaler.transform(np.array([[-5.0], [20.0]])), [[-1.0], [1.0]])


def test_one_hot():
    np.testing.assert_array_equal(datapipe.one_hot([2], 3), [[0, 0, 1]])
    np.testing.assert_array_equal(datapipe.one_hot([0, 1], 2), np.eye(2))
    with pytest.raises(IndexError):
        datapipe.one_hot([3], 3)


def test_split_sizes():
    split = datapipe.holdout_split(_dataset([50, 50, 50]), 0.8, seed=1)
    assert (split.train.n_samples, split.test.n_samples) == (120, 30)
    assert not set(split.train_indices) & set(split.test_indices)


def test_split_is_deterministic():
    ds = _dataset([5, 5])
    a = datapipe.holdout_split(ds, 0.8, seed=4)
    b = datapipe.holdout_split(ds, 0.8, seed=4)
    np.testing.assert_array_equal(a.train_indices, b.train_indices)


def test_stratified_counts():
    split = datapipe.holdout_split(_dataset([90, 10]), 0.8, seed=0)
    assert np.bincount(split.train.labels).tolist() == [72, 8]


def test_largest_remainder_allocation():
    # 0.8 * (7, 7, 7) = 5.6 each; total round(16.8) = 17 -> one class takes the extra row
    assert datapipe._allocate([7, 7, 7], 0.8) == [6, 6, 5]
    assert sum(datapipe._allocate([59, 71, 48], 0.8)) == 142


def test_stratification_error():
    with pytest.raises(StratificationError):
        datapipe.holdout_split(_dataset([20, 1]), 0.2, seed=0)
    with pytest.raises(DataError):
        datapipe.holdout_split(_dataset([5, 5]), 1.0)
