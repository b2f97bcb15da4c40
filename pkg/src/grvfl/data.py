"""Dataset ingestion, second-view synthesis, scaling, splitting, and label encoding."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin


class DataError(ValueError):
    """Malformed or unusable input data (parse failures, label problems, bad splits)."""


@dataclass
class LabeledDataset:
    """A single-view tabular dataset with exactly two label values.

    Attributes
    ----------
    features : ndarray of shape (n_samples, n_features)
    labels : ndarray of shape (n_samples,)
        Two distinct values; dtype may be text or numeric.
    name : str
    """

    features: np.ndarray
    labels: np.ndarray
    name: str = "dataset"

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels)
        if self.features.ndim != 2:
            raise DataError("features must be a 2-D matrix")
        if self.features.shape[0] != self.labels.shape[0]:
            raise DataError(
                f"{self.name!r}: {self.features.shape[0]} feature rows but "
                f"{self.labels.shape[0]} labels"
            )
        if not np.all(np.isfinite(self.features)):
            raise DataError(f"{self.name!r}: non-finite feature entries")
        n_classes = np.unique(self.labels).size
        if n_classes != 2:
            raise DataError(
                f"{self.name!r} is not binary: found {n_classes} distinct labels"
            )

    @property
    def n_samples(self):
        return self.features.shape[0]


@dataclass
class MultiViewDataset:
    """Two feature representations of the same samples with shared labels."""

    view_a: np.ndarray
    view_b: np.ndarray
    labels: np.ndarray
    name: str = "dataset"

    def __post_init__(self):
        self.view_a = np.asarray(self.view_a, dtype=float)
        self.view_b = np.asarray(self.view_b, dtype=float)
        self.labels = np.asarray(self.labels)
        if self.view_a.ndim != 2 or self.view_b.ndim != 2:
            raise DataError("views must be 2-D matrices")
        l = self.labels.shape[0]
        if self.view_a.shape[0] != l or self.view_b.shape[0] != l:
            raise DataError(
                f"{self.name!r}: row counts differ "
                f"(view_a={self.view_a.shape[0]}, view_b={self.view_b.shape[0]},"
                f" labels={l})"
            )
        if self.view_a.shape[1] < 1 or self.view_b.shape[1] < 1:
            raise DataError(f"{self.name!r}: both views need at least one column")

    @property
    def n_samples(self):
        return self.labels.shape[0]

    def subset(self, indices):
        """New dataset restricted to the given row indices."""
        idx = np.asarray(indices)
        return MultiViewDataset(
            self.view_a[idx], self.view_b[idx], self.labels[idx], name=self.name
        )

    def views(self):
        return [self.view_a, self.view_b]


@dataclass
class OneHotTargets:
    """Indicator target matrix and the label value mapped to each column.

    Column 0 corresponds to the smaller label value, column 1 to the larger;
    each row holds a single 1.
    """

    matrix: np.ndarray
    class_order: np.ndarray


def one_hot(labels):
    """Encode binary labels as an (n_samples, 2) indicator matrix.

    Classes are ordered ascending; row i carries a 1 in the column of
    labels[i]. Raises DataError unless exactly two distinct values occur.
    """
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size != 2:
        raise DataError(
            f"labels are not binary: found {classes.size} distinct values"
        )
    second = (labels == classes[1]).astype(float)
    return OneHotTargets(np.column_stack([1.0 - second, second]), classes)


def load_csv(path, has_header=False):
    """Read a labeled dataset from a comma-separated file.

    The last column is the label (kept verbatim as text); every other cell
    must parse as a finite real. Raises DataError on ragged rows, bad cells
    (reported with 1-based row/column), empty files, or non-binary labels.
    """
    path = Path(path)
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            rows.append((line_no, [cell.strip() for cell in row]))
    if has_header and rows:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: empty file")
    width = len(rows[0][1])
    if width < 2:
        raise DataError(f"{path}: need at least two columns (features + label)")
    features, labels = [], []
    for line_no, row in rows:
        if len(row) != width:
            raise DataError(
                f"{path}: row {line_no} has {len(row)} columns, expected {width}"
            )
        values = []
        for col, cell in enumerate(row[:-1], start=1):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {line_no}, column {col}: "
                    f"cannot parse {cell!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise DataError(
                    f"{path}: row {line_no}, column {col}: non-finite value {cell!r}"
                )
            values.append(value)
        features.append(values)
        labels.append(row[-1])
    return LabeledDataset(np.array(features), np.array(labels), name=path.stem)


def load_csv_features(path, n_features, has_header=False):
    """Read a feature matrix for prediction, tolerating a trailing label column.

    Accepts files with exactly `n_features` columns (unlabeled) or
    `n_features + 1` columns (last column returned as labels). Returns
    (features, labels_or_None).
    """
    path = Path(path)
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            rows.append((line_no, [cell.strip() for cell in row]))
    if has_header and rows:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: empty file")
    width = len(rows[0][1])
    if width == n_features:
        labeled = False
    elif width == n_features + 1:
        labeled = True
    else:
        raise DataError(
            f"{path}: expected {n_features} feature columns "
            f"(or {n_features + 1} with a label), found {width}"
        )
    features, labels = [], []
    for line_no, row in rows:
        if len(row) != width:
            raise DataError(
                f"{path}: row {line_no} has {len(row)} columns, expected {width}"
            )
        stop = width - 1 if labeled else width
        values = []
        for col, cell in enumerate(row[:stop], start=1):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {line_no}, column {col}: "
                    f"cannot parse {cell!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise DataError(
                    f"{path}: row {line_no}, column {col}: non-finite value {cell!r}"
                )
            values.append(value)
        features.append(values)
        if labeled:
            labels.append(row[-1])
    X = np.array(features)
    return X, (np.array(labels) if labeled else None)


class Standardizer(TransformerMixin, BaseEstimator):
    """Per-column z-scoring with training statistics.

    Uses the population standard deviation; zero-variance columns are
    centered only (scale recorded as 1).
    """

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise DataError("cannot fit a scaler on an empty matrix")
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std == 0.0, 1.0, std)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DataError(
                f"scaler fitted on {self.n_features_in_} columns, "
                f"got matrix with shape {X.shape}"
            )
        return (X - self.mean_) / self.scale_

    def to_dict(self):
        return {"mean": self.mean_.tolist(), "scale": self.scale_.tolist()}

    @classmethod
    def from_dict(cls, d):
        scaler = cls()
        scaler.mean_ = np.array(d["mean"], dtype=float)
        scaler.scale_ = np.array(d["scale"], dtype=float)
        scaler.n_features_in_ = scaler.mean_.shape[0]
        return scaler


def standardize(train, apply_to=()):
    """Z-score `train` per column and transform `apply_to` with its statistics.

    Returns ([train_std, *apply_to_std], scaler).
    """
    scaler = Standardizer().fit(train)
    transformed = [scaler.transform(train)] + [scaler.transform(m) for m in apply_to]
    return transformed, scaler


class PCAView(TransformerMixin, BaseEstimator):
    """Second-view synthesis: projection onto leading principal components.

    Keeps the smallest leading set of components whose cumulative explained
    variance reaches `variance_fraction` (at least one). Components are
    ordered by descending eigenvalue, and each component's sign is fixed so
    that its largest-magnitude loading is positive, making the projection
    reproducible across linear-algebra backends.

    Attributes
    ----------
    mean_ : ndarray of shape (n_features,)
    components_ : ndarray of shape (n_components_, n_features)
    explained_variance_ratio_ : ndarray of shape (n_components_,)
    n_components_ : int
    """

    def __init__(self, variance_fraction=0.95):
        self.variance_fraction = variance_fraction

    def fit(self, X, y=None):
        if not 0.0 < self.variance_fraction <= 1.0:
            raise DataError(
                f"variance_fraction must be in (0, 1], got {self.variance_fraction}"
            )
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] < 2:
            raise DataError("need at least 2 samples to extract principal components")
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite entries in input matrix")
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        scale = float(np.abs(centered).max(initial=0.0))
        if s.size == 0 or s[0] <= X.shape[0] * np.finfo(float).eps * scale or scale == 0.0:
            raise DataError("degenerate data, no principal components")
        ratio = s**2 / np.sum(s**2)
        cumulative = np.cumsum(ratio)
        cumulative[-1] = 1.0
        m = int(np.searchsorted(cumulative, self.variance_fraction, side="left")) + 1
        m = min(m, s.size)
        components = vt[:m].copy()
        for row in components:
            if row[np.argmax(np.abs(row))] < 0:
                row *= -1.0
        self.components_ = components
        self.explained_variance_ratio_ = ratio[:m]
        self.n_components_ = m
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DataError(
                f"projection fitted on {self.n_features_in_} columns, "
                f"got matrix with shape {X.shape}"
            )
        return (X - self.mean_) @ self.components_.T

    def to_dict(self):
        return {
            "variance_fraction": self.variance_fraction,
            "mean": self.mean_.tolist(),
            "components": self.components_.tolist(),
            "explained_variance_ratio": self.explained_variance_ratio_.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        view = cls(variance_fraction=d["variance_fraction"])
        view.mean_ = np.array(d["mean"], dtype=float)
        view.components_ = np.array(d["components"], dtype=float)
        view.explained_variance_ratio_ = np.array(
            d["explained_variance_ratio"], dtype=float
        )
        view.n_components_ = view.components_.shape[0]
        view.n_features_in_ = view.mean_.shape[0]
        return view


def pca_view(X, variance_fraction):
    """Project X onto its leading principal components (see PCAView)."""
    return PCAView(variance_fraction=variance_fraction).fit(X).transform(X)


def train_test_indices(labels, train_fraction, seed, max_retries=100):
    """Seeded shuffle split with both label values guaranteed in training.

    Training gets ceil(train_fraction * n) rows. Reshuffles (up to
    `max_retries` draws from the same generator) until the training part
    holds both classes; never returns an empty test set.
    """
    labels = np.asarray(labels)
    l = labels.shape[0]
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if l < 2:
        raise DataError("need at least 2 samples to split")
    n_train = int(math.ceil(train_fraction * l))
    if n_train >= l:
        raise DataError(
            f"train_fraction {train_fraction} leaves an empty test set "
            f"for {l} samples"
        )
    n_classes = np.unique(labels).size
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        perm = rng.permutation(l)
        train = perm[:n_train]
        if np.unique(labels[train]).size == n_classes:
            return np.sort(train), np.sort(perm[n_train:])
    raise DataError(
        f"could not place both classes in the training split "
        f"after {max_retries} shuffles"
    )


def split_train_test(ds, train_fraction, seed):
    """Split a MultiViewDataset into (train, test) by seeded shuffle."""
    train_idx, test_idx = train_test_indices(ds.labels, train_fraction, seed)
    return ds.subset(train_idx), ds.subset(test_idx)


def kfold_indices(l, k, seed):
    """Seeded k-fold partition of range(l): list of (train_idx, val_idx).

    Fold sizes differ by at most one and every sample lands in exactly one
    validation fold.
    """
    if not 2 <= k <= l:
        raise DataError(f"k={k} out of range for {l} samples")
    rng = np.random.default_rng(seed)
    folds = np.array_split(rng.permutation(l), k)
    pairs = []
    for i in range(k):
        val = np.sort(folds[i])
        train = np.sort(np.concatenate([folds[j] for j in range(k) if j != i]))
        pairs.append((train, val))
    return pairs


def kfold(ds, k, seed):
    """Seeded k-fold split of a MultiViewDataset: list of (train, validation)."""
    return [
        (ds.subset(train_idx), ds.subset(val_idx))
        for train_idx, val_idx in kfold_indices(ds.n_samples, k, seed)
    ]
