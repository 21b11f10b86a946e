"""CSV datasets, [-1, 1] min-max scaling, one-hot targets and hold-out splits."""
import csv
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError, FormatError, MissingValueError, ParseError, StratificationError


@dataclass(frozen=True)
class Dataset:
    name: str
    features: np.ndarray
    labels: np.ndarray
    class_names: tuple

    def __post_init__(self):
        if self.features.ndim != 2 or self.features.shape[0] != self.labels.shape[0]:
            raise DataError("features and labels disagree in length")

    @property
    def n_samples(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    @property
    def n_classes(self):
        return len(self.class_names)

    def subset(self, indices):
        return replace(self, features=self.features[indices], labels=self.labels[indices])

    def targets(self):
        return one_hot(self.labels, self.n_classes)


@dataclass(frozen=True)
class DataSplit:
    train: Dataset
    test: Dataset
    train_indices: np.ndarray
    test_indices: np.ndarray
    fraction: float
    seed: int
    stratified: bool = True


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(path, label_column="last", name=None):
    """Read a comma-separated file; a non-numeric first row is treated as a header.

    Labels are mapped to contiguous indices in order of first appearance.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise FormatError(f"{path}: file is empty")

    width = len(rows[0])
    if width < 2:
        raise FormatError(f"{path}: need at least one feature column and a label column")
    label_idx = width - 1 if label_column == "last" else int(label_column)
    if not -width <= label_idx < width:
        raise FormatError(f"{path}: label column {label_column} out of range for {width} columns")
    label_idx %= width

    first_features = [c.strip() for i, c in enumerate(rows[0]) if i != label_idx]
    start = 0 if all(_is_number(c) for c in first_features if c) else 1

    feats, raw_labels = [], []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise FormatError(f"{path}: row {lineno} has {len(row)} columns, expected {width}")
        values = []
        for col, cell in enumerate(row):
            cell = cell.strip()
            if not cell:
                raise MissingValueError(f"{path}: missing value at row {lineno}, column {col + 1}")
            if col == label_idx:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"{path}: non-numeric feature {cell!r} at row {lineno}, column {col + 1}") from None
            if not math.isfinite(values[-1]):
                raise ParseError(f"{path}: non-finite feature at row {lineno}, column {col + 1}")
        feats.append(values)
        raw_labels.append(row[label_idx].strip())

    classes = list(dict.fromkeys(raw_labels))
    lookup = {c: i for i, c in enumerate(classes)}
    labels = np.array([lookup[c] for c in raw_labels], dtype=np.int64)
    if len(feats) < 2:
        raise DataError(f"{path}: need at least 2 samples, found {len(feats)}")
    if len(classes) < 2:
        raise DataError(f"{path}: need at least 2 classes, found {len(classes)}")
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    return Dataset(name, np.array(feats, dtype=float), labels, tuple(classes))


def save_csv(dataset, path, header=True):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow([f"x{i}" for i in range(dataset.n_features)] + ["label"])
        for row, label in zip(dataset.features, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [dataset.class_names[label]])


@dataclass(frozen=True)
class MinMaxScaler:
    low: np.ndarray
    high: np.ndarray

    @classmethod
    def fit(cls, features):
        return cls(features.min(axis=0), features.max(axis=0))

    def transform(self, features):
        span = self.high - self.low
        safe = np.where(span > 0, span, 1.0)
        out = 2.0 * (features - self.low) / safe - 1.0
        out[:, span <= 0] = 0.0
        # values outside the fitted range (train-only statistics) are clipped
        return np.clip(out, -1.0, 1.0)


def normalize(dataset, scaler=None):
    """Min-max scale every feature into [-1, 1]; constant features become 0."""
    if dataset.n_samples < 1:
        raise DataError("cannot normalise an empty dataset")
    scaler = scaler or MinMaxScaler.fit(dataset.features)
    return replace(dataset, features=scaler.transform(dataset.features))


def one_hot(labels, n_classes):
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise IndexError(f"labels must lie in [0, {n_classes})")
    out = np.zeros((labels.size, n_classes))
    out[np.arange(labels.size), labels] = 1.0
    return out


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def _allocate(class_sizes, fraction):
    """Per-class train counts summing to round(fraction * N), largest remainder first."""
    total = _round_half_up(fraction * sum(class_sizes))
    exact = [fraction * n for n in class_sizes]
    counts = [int(math.floor(e)) for e in exact]
    order = sorted(range(len(class_sizes)), key=lambda c: (-(exact[c] - counts[c]), c))
    for c in order[:max(0, total - sum(counts))]:
        counts[c] += 1
    return counts


def holdout_split(dataset, fraction=0.8, seed=0, stratified=True):
    if not 0 < fraction < 1:
        raise DataError(f"split fraction must lie in (0, 1), got {fraction}")
    rng = np.random.default_rng(seed)
    n = dataset.n_samples
    if stratified:
        groups = [np.flatnonzero(dataset.labels == c) for c in range(dataset.n_classes)]
        counts = _allocate([g.size for g in groups], fraction)
        train_parts = []
        for c, (group, k) in enumerate(zip(groups, counts)):
            if k == 0:
                raise StratificationError(
                    f"class {dataset.class_names[c]!r} ({group.size} samples) gets no training rows")
            train_parts.append(rng.permutation(group)[:k])
        train_idx = np.sort(np.concatenate(train_parts))
    else:
        train_idx = np.sort(rng.permutation(n)[:_round_half_up(fraction * n)])
        missing = set(range(dataset.n_classes)) - set(dataset.labels[train_idx].tolist())
        if missing:
            names = [dataset.class_names[c] for c in sorted(missing)]
            raise StratificationError(f"classes {names} absent from the training split")
    mask = np.ones(n, dtype=bool)
    mask[train_idx] = False
    test_idx = np.flatnonzero(mask)
    return DataSplit(dataset.subset(train_idx), dataset.subset(test_idx),
                     train_idx, test_idx, fraction, seed, stratified)
