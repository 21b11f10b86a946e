"""Confusion matrices and one-vs-rest precision / recall / F-measure."""
import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are actual classes, columns predicted classes."""

    counts: np.ndarray

    @property
    def n_classes(self):
        return self.counts.shape[0]

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def correct(self):
        return int(np.trace(self.counts))

    @property
    def accuracy(self):
        return self.correct / self.total if self.total else 0.0

    def to_csv(self, path, class_names=None):
        names = list(class_names) if class_names is not None else [str(i) for i in range(self.n_classes)]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["actual\\predicted"] + names)
            for name, row in zip(names, self.counts):
                writer.writerow([name] + [int(c) for c in row])

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        return cls(np.array([[int(c) for c in row[1:]] for row in rows[1:]], dtype=np.int64))


@dataclass(frozen=True)
class ClassMetrics:
    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray
    tn: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f_measure: np.ndarray
    zero_division: np.ndarray
    accuracy: float

    @property
    def macro_f(self):
        return float(np.mean(self.f_measure))

    @property
    def headline_f(self):
        """Positive-class (index 1) F-measure for binary problems, macro F otherwise."""
        if self.f_measure.size == 2:
            return float(self.f_measure[1])
        return self.macro_f

    def as_dict(self):
        return dict(
            accuracy=self.accuracy,
            macro_f=self.macro_f,
            headline_f=self.headline_f,
            tp=self.tp.tolist(), fp=self.fp.tolist(), fn=self.fn.tolist(), tn=self.tn.tolist(),
            precision=self.precision.tolist(), recall=self.recall.tolist(),
            f_measure=self.f_measure.tolist(),
            zero_division=self.zero_division.tolist(),
        )

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def confusion_matrix(actual, predicted, n_classes):
    actual = np.asarray(actual, dtype=np.int64)
    predicted = np.asarray(predicted, dtype=np.int64)
    if actual.shape != predicted.shape or actual.ndim != 1:
        raise DataError(f"actual {actual.shape} and predicted {predicted.shape} must be equal-length vectors")
    for arr in (actual, predicted):
        if arr.size and (arr.min() < 0 or arr.max() >= n_classes):
            raise DataError(f"class index outside [0, {n_classes})")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (actual, predicted), 1)
    return ConfusionMatrix(counts)


def f_measure(precision, recall):
    """Harmonic mean 2PR/(P+R); 0 when both are 0."""
    denom = precision + recall
    return 2.0 * precision * recall / denom if denom > 0 else 0.0


def class_metrics(cm):
    counts = cm.counts
    total = counts.sum()
    if total == 0:
        raise DataError("confusion matrix is empty")
    tp = np.diag(counts).astype(np.int64)
    fp = counts.sum(axis=0) - tp
    fn = counts.sum(axis=1) - tp
    tn = total - tp - fp - fn

    pred_pos = tp + fp
    real_pos = tp + fn
    precision = np.divide(tp, pred_pos, out=np.zeros(tp.shape), where=pred_pos > 0)
    recall = np.divide(tp, real_pos, out=np.zeros(tp.shape), where=real_pos > 0)
    fm = np.array([f_measure(p, r) for p, r in zip(precision, recall)])
    flags = (pred_pos == 0) | (real_pos == 0)
    return ClassMetrics(tp, fp, fn, tn, precision, recall, fm, flags, cm.accuracy)
