"""Exhaustive hyperparameter search and rank-based model comparison statistics."""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np
from scipy.stats import rankdata
from threadpoolctl import threadpool_limits

from .data import kfold_indices
from .feature_map import derived_seed
from .graph import SingularPenaltyError
from .models import (
    GraphMVRVFLClassifier,
    HyperParams,
    RVFLClassifier,
    SingularSystemError,
)

DEFAULT_LOG_GRID = tuple(10.0**k for k in range(-5, 6))
DEFAULT_H_GRID = tuple(range(3, 204, 20))

# Critical values of the studentized range statistic divided by sqrt(2) at
# alpha = 0.05, indexed by the number of models (Demsar, JMLR 7, 2006).
Q_ALPHA_05 = {
    2: 1.960, 3: 2.343, 4: 2.569, 5: 2.728, 6: 2.850,
    7: 2.949, 8: 3.031, 9: 3.102, 10: 3.164,
}

# numeric failures treated as "this combination is unusable", not fatal
_COMBO_FAILURES = (SingularSystemError, SingularPenaltyError, np.linalg.LinAlgError)


def q_alpha_05(n_models):
    """Nemenyi critical value at the 5% level for 2..10 compared models."""
    try:
        return Q_ALPHA_05[n_models]
    except KeyError:
        raise ValueError(
            f"no embedded q value for {n_models} models (table covers 2..10)"
        ) from None


@dataclass(frozen=True)
class HyperGrid:
    """Search space for the two-view model.

    The four axes default to eleven logarithmic values 1e-5..1e5 for c,
    theta, and rho, and hidden widths 3, 23, ..., 203. Tie rules during the
    search: c1 = c2 = c3, theta1 = theta2, h_a = h_b (untied values can
    still be set directly on HyperParams outside the grid).
    """

    c_values: tuple = DEFAULT_LOG_GRID
    theta_values: tuple = DEFAULT_LOG_GRID
    rho_values: tuple = DEFAULT_LOG_GRID
    h_values: tuple = DEFAULT_H_GRID
    sigma: float = 1.0
    activation: str = "sigmoid"
    ridge: float = 0.0

    def __post_init__(self):
        for name in ("c_values", "theta_values", "rho_values", "h_values"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must be non-empty")
        if min(self.c_values) <= 0:
            raise ValueError("all c values must be positive")

    @classmethod
    def fast(cls, **overrides):
        """Three values per axis (every fifth default) for smoke-test runs.

        Not the benchmark protocol grid; use the default construction for
        that.
        """
        thinned = {
            "c_values": DEFAULT_LOG_GRID[::5],
            "theta_values": DEFAULT_LOG_GRID[::5],
            "rho_values": DEFAULT_LOG_GRID[::5],
            "h_values": DEFAULT_H_GRID[::5],
        }
        thinned.update(overrides)
        return cls(**thinned)

    def size(self):
        return (len(self.c_values) * len(self.theta_values)
                * len(self.rho_values) * len(self.h_values))

    def combos(self):
        """All hyperparameter combinations in (c, theta, rho, h) lexicographic order."""
        for c, theta, rho, h in product(
            self.c_values, self.theta_values, self.rho_values, self.h_values
        ):
            yield HyperParams(
                c1=c, c2=c, c3=c, theta1=theta, theta2=theta, rho=rho,
                h_a=h, h_b=h, sigma=self.sigma, activation=self.activation,
                ridge=self.ridge,
            )


def accuracy(predicted, truth):
    """Fraction of exact matches between two equal-length label sequences."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError(
            f"length mismatch: {predicted.shape} vs {truth.shape}"
        )
    if predicted.size == 0:
        raise ValueError("cannot score empty label sequences")
    return float(np.mean(predicted == truth))


def _cv_score(fit_predict, folds, ds):
    """Mean validation accuracy over folds; NaN if any fold fails numerically."""
    scores = []
    for train_idx, val_idx in folds:
        train, val = ds.subset(train_idx), ds.subset(val_idx)
        try:
            with np.errstate(all="ignore"):
                predicted = fit_predict(train, val)
        except _COMBO_FAILURES:
            return float("nan")
        scores.append(accuracy(predicted, val.labels))
    return float(np.mean(scores))


def grid_search(train, grid, k=5, seed=0, jobs=1):
    """Exhaustive cross-validated search for the two-view model.

    Every combination in `grid` is scored by mean validation accuracy over
    the same seeded k folds, with the model seed for combination i derived
    from (seed, i) so results do not depend on evaluation order. Returns
    (best HyperParams, per-combination records); ties keep the
    lexicographically smallest combination. Combinations that fail
    numerically score NaN and are never selected; if all fail, raises
    RuntimeError. Fold-construction errors propagate.
    """
    folds = kfold_indices(train.n_samples, k, seed)
    combos = list(grid.combos())

    def evaluate(index):
        hyper = combos[index]
        model_seed = derived_seed(seed, index)

        def fit_predict(sub_train, sub_val):
            model = GraphMVRVFLClassifier(
                c1=hyper.c1, c2=hyper.c2, c3=hyper.c3,
                theta1=hyper.theta1, theta2=hyper.theta2, rho=hyper.rho,
                h_a=hyper.h_a, h_b=hyper.h_b, sigma=hyper.sigma,
                activation=hyper.activation, ridge=hyper.ridge,
                random_state=model_seed,
            )
            model.fit(sub_train.views(), sub_train.labels)
            return model.predict(sub_val.views())

        return _cv_score(fit_predict, folds, train)

    # one BLAS thread per (small) solve: the grid is the parallel axis
    with threadpool_limits(limits=1):
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                scores = list(pool.map(evaluate, range(len(combos))))
        else:
            scores = [evaluate(i) for i in range(len(combos))]

    best_index, best_score = None, -np.inf
    records = []
    for i, (hyper, score) in enumerate(zip(combos, scores)):
        records.append({
            "c": hyper.c1, "theta": hyper.theta1, "rho": hyper.rho,
            "h": hyper.h_a, "cv_accuracy": score,
        })
        if not np.isnan(score) and score > best_score:
            best_index, best_score = i, score
    if best_index is None:
        raise RuntimeError("every hyperparameter combination failed numerically")
    return combos[best_index], records


def rvfl_grid_search(X, y, c_values=DEFAULT_LOG_GRID, h_values=DEFAULT_H_GRID,
                     k=5, seed=0, direct_links=True, activation="sigmoid"):
    """Cross-validated (c, h) search for the single-view baseline.

    Same fold/seed/tie-break conventions as `grid_search`. Returns
    ((best_c, best_h), per-combination records).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    folds = kfold_indices(len(y), k, seed)
    combos = list(product(c_values, h_values))

    scores = []
    with threadpool_limits(limits=1):
        for i, (c, h) in enumerate(combos):
            model_seed = derived_seed(seed, i)
            fold_scores = []
            failed = False
            for train_idx, val_idx in folds:
                try:
                    with np.errstate(all="ignore"):
                        model = RVFLClassifier(
                            c=c, n_hidden=h, activation=activation,
                            direct_links=direct_links, random_state=model_seed,
                        )
                        model.fit(X[train_idx], y[train_idx])
                        predicted = model.predict(X[val_idx])
                except _COMBO_FAILURES:
                    failed = True
                    break
                fold_scores.append(accuracy(predicted, y[val_idx]))
            scores.append(float("nan") if failed else float(np.mean(fold_scores)))

    best_index, best_score = None, -np.inf
    records = []
    for i, ((c, h), score) in enumerate(zip(combos, scores)):
        records.append({"c": c, "h": h, "cv_accuracy": score})
        if not np.isnan(score) and score > best_score:
            best_index, best_score = i, score
    if best_index is None:
        raise RuntimeError("every hyperparameter combination failed numerically")
    return combos[best_index], records


@dataclass
class AccuracyTable:
    """Accuracies of several models over several datasets.

    `acc[i, j]` is model i's accuracy on dataset j, as a fraction in [0, 1].
    """

    models: list
    datasets: list
    acc: np.ndarray

    def __post_init__(self):
        self.acc = np.asarray(self.acc, dtype=float)
        if self.acc.shape != (len(self.models), len(self.datasets)):
            raise ValueError(
                f"accuracy matrix shape {self.acc.shape} does not match "
                f"{len(self.models)} models x {len(self.datasets)} datasets"
            )
        if self.acc.size == 0:
            raise ValueError("empty accuracy table")
        if not np.all(np.isfinite(self.acc)):
            raise ValueError("accuracy table has missing or non-finite cells")
        if self.acc.min() < 0 or self.acc.max() > 1:
            raise ValueError("accuracies must lie in [0, 1]")

    def to_csv(self, path):
        """Write datasets as rows and models as columns."""
        with open(Path(path), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["dataset"] + list(self.models))
            for j, dataset in enumerate(self.datasets):
                writer.writerow([dataset] + [repr(float(v)) for v in self.acc[:, j]])

    @classmethod
    def from_csv(cls, path):
        """Read a table written by `to_csv`; percentages are normalized to fractions."""
        with open(Path(path), newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row]
        if len(rows) < 2:
            raise ValueError(f"{path}: need a header and at least one dataset row")
        header = rows[0]
        models = [cell.strip() for cell in header[1:]]
        if len(models) < 1:
            raise ValueError(f"{path}: no model columns")
        datasets, values = [], []
        for row in rows[1:]:
            if len(row) != len(models) + 1:
                raise ValueError(
                    f"{path}: row for {row[0]!r} has {len(row) - 1} cells, "
                    f"expected {len(models)}"
                )
            datasets.append(row[0].strip())
            try:
                values.append([float(cell) for cell in row[1:]])
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric accuracy cell in row {row[0]!r}"
                ) from None
        acc = np.array(values).T
        if acc.max() > 1.0:
            acc = acc / 100.0
        return cls(models=models, datasets=datasets, acc=acc)


def per_dataset_ranks(table):
    """Fractional ranks per dataset: rank 1 is the best accuracy, ties share
    the mean of the ranks they cover. Shape (n_models, n_datasets)."""
    return np.column_stack(
        [rankdata(-table.acc[:, j]) for j in range(len(table.datasets))]
    )


def rank_models(table):
    """Average rank of every model across datasets."""
    return per_dataset_ranks(table).mean(axis=1)


def friedman(avg_ranks, n_datasets, n_models):
    """Friedman chi-squared statistic and its F-distributed refinement.

    chi2 = 12 N / (lam (lam+1)) * [sum_p R_p^2 - lam (lam+1)^2 / 4]
    F    = (N-1) chi2 / (N (lam-1) - chi2)
    """
    avg_ranks = np.asarray(avg_ranks, dtype=float)
    if n_models < 2:
        raise ValueError("need at least 2 models")
    if n_datasets < 2:
        raise ValueError("need at least 2 datasets")
    if avg_ranks.shape != (n_models,):
        raise ValueError(
            f"expected {n_models} average ranks, got shape {avg_ranks.shape}"
        )
    chi2 = (12.0 * n_datasets / (n_models * (n_models + 1))) * (
        np.sum(avg_ranks**2) - n_models * (n_models + 1) ** 2 / 4.0
    )
    denominator = n_datasets * (n_models - 1) - chi2
    if denominator == 0:
        raise ZeroDivisionError(
            "Friedman F undefined: N(lambda - 1) equals chi-squared"
        )
    return float(chi2), float((n_datasets - 1) * chi2 / denominator)


def nemenyi_cd(n_models, n_datasets, q_alpha):
    """Nemenyi critical difference q_alpha * sqrt(lam (lam+1) / (6 N))."""
    if n_models < 2 or n_datasets < 1 or q_alpha < 0:
        raise ValueError("need n_models >= 2, n_datasets >= 1, q_alpha >= 0")
    return float(q_alpha * np.sqrt(n_models * (n_models + 1) / (6.0 * n_datasets)))


def win_threshold(n_datasets):
    """Wins needed for a significant pairwise difference: N/2 + 1.96 sqrt(N)/2."""
    return float(n_datasets / 2.0 + 1.96 * np.sqrt(n_datasets) / 2.0)


def adjusted_wins(wins, ties):
    """Wins credited after splitting ties evenly; an odd tie is dropped first."""
    return np.asarray(wins) + np.asarray(ties) // 2


@dataclass
class WinTieLoss:
    """Pairwise win/tie/loss counts across datasets.

    `wins[i, j]` counts datasets where model i strictly beats model j;
    `ties` and `losses` follow the same orientation. `threshold` is the
    significance cutoff for (tie-adjusted) wins.
    """

    models: list
    wins: np.ndarray
    ties: np.ndarray
    losses: np.ndarray
    threshold: float


def win_tie_loss(table):
    """Pairwise win-tie-loss counts over an accuracy table."""
    acc = table.acc
    wins = (acc[:, None, :] > acc[None, :, :]).sum(axis=2)
    ties = (acc[:, None, :] == acc[None, :, :]).sum(axis=2)
    np.fill_diagonal(ties, 0)
    return WinTieLoss(
        models=list(table.models),
        wins=wins,
        ties=ties,
        losses=wins.T.copy(),
        threshold=win_threshold(len(table.datasets)),
    )
