"""Closed-form classifiers: single-view RVFL and the coupled two-view variant.

Both models draw fixed random hidden layers and learn only output weights.
The single-view model solves an ordinary ridge system; the two-view model
solves one symmetric block system that couples the views' residuals and
penalizes output weights through each view's graph embedding matrix.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import lapack
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y, column_or_1d

from .data import one_hot
from .feature_map import (
    ACTIVATIONS,
    FeatureMapParams,
    derived_seed,
    enhance,
    init_feature_map,
)
from .graph import embedding_matrix, laplacians, lfda_weights

MODEL_SCHEMA_VERSION = 1

COND_GUARD_LIMIT = 1e12


class SingularSystemError(RuntimeError):
    """Coupled block system could not be solved reliably."""


class SchemaError(ValueError):
    """Serialized model file has an unknown or incompatible layout."""


@dataclass(frozen=True)
class HyperParams:
    """Hyperparameters of the coupled two-view model.

    c1, c2 weigh each view's empirical error, c3 the first view's weight
    norm (the second view's norm carries a fixed unit weight), theta1 and
    theta2 the graph regularizers, and rho the cross-view residual
    coupling. h_a and h_b are the hidden widths, sigma the affinity kernel
    scale, and ridge the baseline regularization of the penalty Gram
    matrix.
    """

    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    theta1: float = 0.1
    theta2: float = 0.1
    rho: float = 0.01
    h_a: int = 100
    h_b: int = 100
    sigma: float = 1.0
    activation: str = "sigmoid"
    ridge: float = 0.0

    def __post_init__(self):
        if min(self.c1, self.c2, self.c3) <= 0:
            raise ValueError("c1, c2, c3 must be positive")
        if self.theta1 < 0 or self.theta2 < 0:
            raise ValueError("theta1 and theta2 must be non-negative")
        if self.h_a < 1 or self.h_b < 1:
            raise ValueError("hidden widths must be at least 1")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.ridge < 0:
            raise ValueError("ridge must be non-negative")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")


def ridge_weights_primal(D, Y, c):
    """Output weights (D'D + I/c)^-1 D'Y via a dense solve."""
    d = D.shape[1]
    return np.linalg.solve(D.T @ D + np.eye(d) / c, D.T @ Y)


def ridge_weights_dual(D, Y, c):
    """Output weights D'(DD' + I/c)^-1 Y; agrees with the primal form."""
    l = D.shape[0]
    return D.T @ np.linalg.solve(D @ D.T + np.eye(l) / c, Y)


def labels_from_scores(scores, classes):
    """Map score rows to class labels by argmax; ties go to column 0."""
    return np.asarray(classes)[np.argmax(scores, axis=1)]


def solve_coupled_system(Z1, Z2, G1, G2, Y, hyper):
    """Solve the block system tying both views' output weights together.

    The system is

        [ c3*I + theta1*G1 + c1*Z1'Z1    rho*Z1'Z2                  ] [b1]
        [ rho*Z2'Z1                      I + theta2*G2 + c2*Z2'Z2   ] [b2]
            = [ (c1+rho)*Z1'Y ; (c2+rho)*Z2'Y ]

    factored once with LAPACK's symmetric-indefinite LDL' (the explicit
    inverse is never formed). If the 1-norm condition estimate exceeds
    1e12, the solve is retried once with both diagonal blocks inflated by
    1e-6 * |trace| / dim. Returns (beta1, beta2, diagnostics) where the
    diagnostics carry the condition estimate, the relative solve residual,
    and whether the inflation retry fired.
    """
    d1, d2 = Z1.shape[1], Z2.shape[1]
    dim = d1 + d2
    A = np.empty((dim, dim))
    A[:d1, :d1] = hyper.c3 * np.eye(d1) + hyper.theta1 * G1 + hyper.c1 * (Z1.T @ Z1)
    A[:d1, d1:] = hyper.rho * (Z1.T @ Z2)
    A[d1:, :d1] = A[:d1, d1:].T
    A[d1:, d1:] = np.eye(d2) + hyper.theta2 * G2 + hyper.c2 * (Z2.T @ Z2)
    rhs = np.vstack([(hyper.c1 + hyper.rho) * (Z1.T @ Y),
                     (hyper.c2 + hyper.rho) * (Z2.T @ Y)])

    def factor_solve(matrix):
        ldu, piv, info = lapack.dsytrf(matrix, lower=1)
        if info != 0:
            return None, np.inf
        one_norm = float(np.abs(matrix).sum(axis=0).max())
        rcond, _ = lapack.dsycon(ldu, piv, one_norm, lower=1)
        cond = np.inf if rcond == 0 else 1.0 / float(rcond)
        solution, info = lapack.dsytrs(ldu, piv, rhs, lower=1)
        if info != 0 or not np.all(np.isfinite(solution)):
            return None, cond
        return solution, cond

    solution, cond = factor_solve(A)
    guard_fired = False
    if solution is None or cond > COND_GUARD_LIMIT:
        guard_fired = True
        bump = 1e-6 * abs(float(np.trace(A))) / dim
        A = A + bump * np.eye(dim)
        solution, cond = factor_solve(A)
    if solution is None:
        raise SingularSystemError(
            f"coupled block system is numerically singular "
            f"(condition estimate {cond:.3e}); lower |rho| or raise c3"
        )
    rhs_norm = float(np.linalg.norm(rhs))
    residual = float(np.linalg.norm(A @ solution - rhs)) / max(rhs_norm, 1e-300)
    diagnostics = {
        "condition_estimate": cond,
        "solve_residual": residual,
        "stability_guard": guard_fired,
    }
    # LAPACK hands back Fortran-ordered storage; normalize so matmuls take
    # the same BLAS path as after a JSON round trip (bitwise reproducibility)
    return (
        np.ascontiguousarray(solution[:d1]),
        np.ascontiguousarray(solution[d1:]),
        diagnostics,
    )


def objective_and_gradient(Z1, Z2, G1, G2, Y, hyper, beta1, beta2):
    """Value and analytic gradient of the unconstrained training objective.

    J = c1/2 ||Z1 b1 - Y||^2 + c2/2 ||Z2 b2 - Y||^2 + c3/2 ||b1||^2
        + 1/2 ||b2||^2 + theta1/2 tr(b1' G1 b1) + theta2/2 tr(b2' G2 b2)
        + rho tr((Z1 b1 - Y)' (Z2 b2 - Y))

    with Frobenius norms throughout. The gradient is returned flattened as
    (b1-part, b2-part); it uses the symmetric part of G, which is the exact
    derivative of the trace terms.
    """
    r1 = Z1 @ beta1 - Y
    r2 = Z2 @ beta2 - Y
    g1_sym = 0.5 * (G1 + G1.T)
    g2_sym = 0.5 * (G2 + G2.T)
    value = (
        0.5 * hyper.c1 * np.sum(r1 * r1)
        + 0.5 * hyper.c2 * np.sum(r2 * r2)
        + 0.5 * hyper.c3 * np.sum(beta1 * beta1)
        + 0.5 * np.sum(beta2 * beta2)
        + 0.5 * hyper.theta1 * np.sum(beta1 * (G1 @ beta1))
        + 0.5 * hyper.theta2 * np.sum(beta2 * (G2 @ beta2))
        + hyper.rho * np.sum(r1 * r2)
    )
    grad1 = (
        hyper.c1 * (Z1.T @ r1)
        + hyper.rho * (Z1.T @ r2)
        + hyper.c3 * beta1
        + hyper.theta1 * (g1_sym @ beta1)
    )
    grad2 = (
        hyper.c2 * (Z2.T @ r2)
        + hyper.rho * (Z2.T @ r1)
        + beta2
        + hyper.theta2 * (g2_sym @ beta2)
    )
    return float(value), np.concatenate([grad1.ravel(), grad2.ravel()])


class RVFLClassifier(ClassifierMixin, BaseEstimator):
    """Random vector functional link classifier with closed-form training.

    A fixed random hidden layer (uniform [-1, 1] weights) feeds a ridge
    solve for the output weights; with `direct_links` the raw features are
    concatenated alongside the hidden features. Disabling direct links
    gives the extreme-learning-machine variant.

    Parameters
    ----------
    c : float, default=1.0
        Inverse ridge strength; the solve regularizes with I/c.
    n_hidden : int, default=100
        Hidden layer width.
    activation : {'sigmoid', 'relu', 'tanh'}, default='sigmoid'
    direct_links : bool, default=True
        Concatenate raw features into the design matrix.
    random_state : int or tuple of int, default=0
        Seed for the hidden-layer draw.

    Attributes
    ----------
    classes_ : ndarray of shape (2,)
        Label values in ascending order; prediction scores map to them
        column-wise.
    coef_ : ndarray of shape (n_features + n_hidden, 2) or (n_hidden, 2)
        Learned output weights.
    feature_map_ : FeatureMapParams
    """

    def __init__(self, c=1.0, n_hidden=100, activation="sigmoid",
                 direct_links=True, random_state=0):
        self.c = c
        self.n_hidden = n_hidden
        self.activation = activation
        self.direct_links = direct_links
        self.random_state = random_state

    def fit(self, X, y):
        """Fit output weights on X and binary labels y."""
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")
        X, y = check_X_y(X, y, dtype=np.float64)
        targets = one_hot(y)
        self.classes_ = targets.class_order
        self.n_features_in_ = X.shape[1]
        self.feature_map_ = init_feature_map(
            X.shape[1], self.n_hidden, self.activation,
            derived_seed(self.random_state, 0),
        )
        D = self._design_matrix(X)
        if D.shape[1] <= D.shape[0]:
            self.coef_ = ridge_weights_primal(D, targets.matrix, self.c)
        else:
            self.coef_ = ridge_weights_dual(D, targets.matrix, self.c)
        return self

    def _design_matrix(self, X):
        Z = enhance(X, self.feature_map_).Z
        return Z if self.direct_links else Z[:, self.n_features_in_:]

    def decision_function(self, X):
        """Per-class scores D @ coef_ for each row of X."""
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return self._design_matrix(X) @ self.coef_

    def predict(self, X):
        """Predicted labels: argmax over score columns, ties to the first."""
        return labels_from_scores(self.decision_function(X), self.classes_)


class GraphMVRVFLClassifier(ClassifierMixin, BaseEstimator):
    """Two-view RVFL with graph embedding and cross-view residual coupling.

    Each view gets its own random enhancement layer and a feature-space
    embedding matrix built from class-aware intrinsic/penalty graph
    Laplacians. Both views' output weights come from a single symmetric
    block solve; prediction averages the two views' scores.

    Parameters
    ----------
    c1, c2, c3 : float, default=1.0
        Error weights for each view and the weight-norm penalty of view A.
        View B's weight norm carries a fixed unit penalty.
    theta1, theta2 : float, default=0.1
        Graph regularization strength per view.
    rho : float, default=0.01
        Coupling weight on the inner product of the two views' residuals.
    h_a, h_b : int, default=100
        Hidden widths per view.
    sigma : float, default=1.0
        Gaussian affinity kernel scale.
    activation : {'sigmoid', 'relu', 'tanh'}, default='sigmoid'
    ridge : float, default=0.0
        Baseline ridge on the penalty Gram matrix (auto-escalated on
        singular solves).
    random_state : int or tuple of int, default=0
        Master seed; per-view map seeds derive as (random_state, 0) and
        (random_state, 1).
    view_seeds : pair of seeds or None, default=None
        Explicit per-view map seeds, overriding the derivation.

    Attributes
    ----------
    classes_ : ndarray of shape (2,)
    beta1_, beta2_ : ndarray
        Output weights per view.
    map_a_, map_b_ : FeatureMapParams
    Z1_, Z2_ : ndarray
        Training design matrices.
    G1_, G2_ : ndarray
        Symmetric embedding matrices used in the solve.
    diagnostics_ : dict
        Condition estimate, relative solve residual, stability-guard flag,
        and per-view ridge actually used.
    """

    def __init__(self, c1=1.0, c2=1.0, c3=1.0, theta1=0.1, theta2=0.1,
                 rho=0.01, h_a=100, h_b=100, sigma=1.0, activation="sigmoid",
                 ridge=0.0, random_state=0, view_seeds=None):
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3
        self.theta1 = theta1
        self.theta2 = theta2
        self.rho = rho
        self.h_a = h_a
        self.h_b = h_b
        self.sigma = sigma
        self.activation = activation
        self.ridge = ridge
        self.random_state = random_state
        self.view_seeds = view_seeds

    def _hyper(self):
        return HyperParams(
            c1=self.c1, c2=self.c2, c3=self.c3, theta1=self.theta1,
            theta2=self.theta2, rho=self.rho, h_a=self.h_a, h_b=self.h_b,
            sigma=self.sigma, activation=self.activation, ridge=self.ridge,
        )

    def _check_views(self, Xs, n_expected=None):
        if not isinstance(Xs, (list, tuple)) or len(Xs) != 2:
            raise ValueError("Xs must be a sequence of exactly two view matrices")
        XA = check_array(Xs[0], dtype=np.float64)
        XB = check_array(Xs[1], dtype=np.float64)
        if XA.shape[0] != XB.shape[0]:
            raise ValueError(
                f"views disagree on sample count: {XA.shape[0]} vs {XB.shape[0]}"
            )
        if n_expected is not None and (XA.shape[1], XB.shape[1]) != n_expected:
            raise ValueError(
                f"expected view widths {n_expected}, "
                f"got ({XA.shape[1]}, {XB.shape[1]})"
            )
        return XA, XB

    def fit(self, Xs, y):
        """Fit both views' output weights on Xs = [X_a, X_b] and labels y."""
        hyper = self._hyper()
        XA, XB = self._check_views(Xs)
        y = column_or_1d(y)
        if len(y) != XA.shape[0]:
            raise ValueError(f"{XA.shape[0]} rows but {len(y)} labels")
        if XA.shape[0] < 2:
            raise ValueError("need at least 2 training samples")
        targets = one_hot(y)
        self.classes_ = targets.class_order
        self.view_dims_ = (XA.shape[1], XB.shape[1])
        if self.view_seeds is not None:
            seed_a, seed_b = self.view_seeds
        else:
            seed_a = derived_seed(self.random_state, 0)
            seed_b = derived_seed(self.random_state, 1)
        self.map_a_ = init_feature_map(XA.shape[1], hyper.h_a, hyper.activation, seed_a)
        self.map_b_ = init_feature_map(XB.shape[1], hyper.h_b, hyper.activation, seed_b)
        Z1 = enhance(XA, self.map_a_).Z
        Z2 = enhance(XB, self.map_b_).Z
        emb1 = embedding_matrix(
            Z1, laplacians(lfda_weights(Z1, y, hyper.sigma)),
            ridge=hyper.ridge, view_name="view-a",
        )
        emb2 = embedding_matrix(
            Z2, laplacians(lfda_weights(Z2, y, hyper.sigma)),
            ridge=hyper.ridge, view_name="view-b",
        )
        beta1, beta2, diagnostics = solve_coupled_system(
            Z1, Z2, emb1.G, emb2.G, targets.matrix, hyper
        )
        self.Z1_, self.Z2_ = Z1, Z2
        self.G1_, self.G2_ = emb1.G, emb2.G
        self.beta1_, self.beta2_ = beta1, beta2
        self.diagnostics_ = dict(
            diagnostics, ridge_used_a=emb1.ridge_used, ridge_used_b=emb2.ridge_used
        )
        return self

    def decision_function(self, Xs):
        """Average of the two views' per-class scores."""
        check_is_fitted(self, "beta1_")
        XA, XB = self._check_views(Xs, n_expected=self.view_dims_)
        Za = enhance(XA, self.map_a_).Z
        Zb = enhance(XB, self.map_b_).Z
        return 0.5 * (Za @ self.beta1_ + Zb @ self.beta2_)

    def predict(self, Xs):
        """Predicted labels: argmax of averaged scores, ties to the first column."""
        return labels_from_scores(self.decision_function(Xs), self.classes_)


def _class_order_to_json(classes):
    return [value.item() if hasattr(value, "item") else value for value in classes]


def model_to_dict(model):
    """Serializable description of a fitted classifier.

    Output weights are stored as row-major lists of decimal floats (JSON
    round-trips them bit-exactly); feature maps are stored as seeds plus
    dimensions and regenerate deterministically.
    """
    if isinstance(model, RVFLClassifier):
        check_is_fitted(model, "coef_")
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "model_type": "rvfl",
            "c": model.c,
            "direct_links": bool(model.direct_links),
            "feature_map": model.feature_map_.to_dict(),
            "class_order": _class_order_to_json(model.classes_),
            "weights": model.coef_.tolist(),
        }
    if isinstance(model, GraphMVRVFLClassifier):
        check_is_fitted(model, "beta1_")
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "model_type": "grvflmv",
            "hyper": asdict(model._hyper()),
            "feature_map_a": model.map_a_.to_dict(),
            "feature_map_b": model.map_b_.to_dict(),
            "class_order": _class_order_to_json(model.classes_),
            "beta1": model.beta1_.tolist(),
            "beta2": model.beta2_.tolist(),
            "diagnostics": {
                key: (bool(value) if isinstance(value, (bool, np.bool_)) else float(value))
                for key, value in model.diagnostics_.items()
            },
        }
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(payload):
    """Rebuild a fitted classifier from `model_to_dict` output."""
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported model schema {payload.get('schema_version')!r}, "
            f"expected {MODEL_SCHEMA_VERSION}"
        )
    kind = payload.get("model_type")
    if kind == "rvfl":
        from_map = payload["feature_map"]
        model = RVFLClassifier(
            c=payload["c"],
            n_hidden=from_map["h"],
            activation=from_map["activation"],
            direct_links=payload["direct_links"],
            random_state=0,
        )
        model.feature_map_ = FeatureMapParams.from_dict(from_map)
        model.classes_ = np.array(payload["class_order"])
        model.coef_ = np.array(payload["weights"], dtype=float)
        model.n_features_in_ = from_map["p"]
        return model
    if kind == "grvflmv":
        hyper = HyperParams(**payload["hyper"])
        model = GraphMVRVFLClassifier(**asdict(hyper), random_state=0)
        model.map_a_ = FeatureMapParams.from_dict(payload["feature_map_a"])
        model.map_b_ = FeatureMapParams.from_dict(payload["feature_map_b"])
        model.classes_ = np.array(payload["class_order"])
        model.beta1_ = np.array(payload["beta1"], dtype=float)
        model.beta2_ = np.array(payload["beta2"], dtype=float)
        model.view_dims_ = (model.map_a_.p, model.map_b_.p)
        model.diagnostics_ = dict(payload.get("diagnostics", {}))
        return model
    raise SchemaError(f"unknown model type {kind!r}")


def save_model(path, model):
    """Write a fitted classifier to a JSON file."""
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, indent=2)


def load_model(path):
    """Load a classifier saved by `save_model`."""
    with open(Path(path), encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not a valid model file ({exc})") from None
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: not a valid model file")
    return model_from_dict(payload)
