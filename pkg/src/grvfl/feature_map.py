"""Random enhancement layer shared by all classifiers.

Hidden weights and biases are drawn i.i.d. uniform on [-1, 1] from numpy's
PCG64 generator (seeded through SeedSequence), so a map regenerates
bit-identically from (seed, p, h, activation) on any platform. The design
matrix concatenates the raw inputs with the activated hidden features.
"""

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.special import expit


def _relu(x):
    return np.maximum(x, 0.0)


ACTIVATIONS = {
    "sigmoid": expit,
    "relu": _relu,
    "tanh": np.tanh,
}


def activation_apply(x, tag):
    """Apply a named activation: sigmoid 1/(1+e^-x), relu max(0, x), or tanh."""
    try:
        fn = ACTIVATIONS[tag]
    except KeyError:
        raise ValueError(
            f"unknown activation {tag!r}; choose from {sorted(ACTIVATIONS)}"
        ) from None
    return fn(np.asarray(x, dtype=float))


def derived_seed(master, *keys):
    """Deterministic child-seed entropy for PCG64: (master..., key...).

    Text keys are hashed to 64-bit integers (first 8 bytes of SHA-256), so
    derived streams are reproducible across platforms and independent of
    evaluation order.
    """
    parts = list(master) if isinstance(master, (tuple, list)) else [master]
    entropy = []
    for part in parts + list(keys):
        if isinstance(part, str):
            entropy.append(
                int.from_bytes(hashlib.sha256(part.encode()).digest()[:8], "big")
            )
        else:
            value = int(part)
            if value < 0:
                raise ValueError(f"seed components must be non-negative, got {value}")
            entropy.append(value)
    return tuple(entropy)


@dataclass(frozen=True)
class FeatureMapParams:
    """Fixed random hidden-layer parameters for one view.

    `W` has shape (p, h) and `b` length h, both with entries in [-1, 1];
    `seed` is the entropy tuple that regenerates them.
    """

    W: np.ndarray
    b: np.ndarray
    activation: str
    seed: tuple
    p: int
    h: int

    def to_dict(self):
        # matrices regenerate from the seed, so only metadata is stored
        return {
            "seed": list(self.seed),
            "p": self.p,
            "h": self.h,
            "activation": self.activation,
        }

    @classmethod
    def from_dict(cls, d):
        return init_feature_map(d["p"], d["h"], d["activation"], tuple(d["seed"]))


def init_feature_map(p, h, activation, seed):
    """Draw the fixed random weights and shared bias column for one view."""
    if p < 1 or h < 1:
        raise ValueError(f"dimensions must be positive, got p={p}, h={h}")
    if activation not in ACTIVATIONS:
        raise ValueError(
            f"unknown activation {activation!r}; choose from {sorted(ACTIVATIONS)}"
        )
    entropy = derived_seed(seed)
    rng = np.random.default_rng(entropy)
    W = rng.uniform(-1.0, 1.0, size=(p, h))
    b = rng.uniform(-1.0, 1.0, size=h)
    return FeatureMapParams(W=W, b=b, activation=activation, seed=entropy, p=p, h=h)


@dataclass(frozen=True)
class EnhancedMatrix:
    """Design matrix [X | phi(XW + b)] with the parameters that produced it."""

    Z: np.ndarray
    params: FeatureMapParams


def enhance(X, params):
    """Build the enhanced matrix: raw features next to activated hidden features."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != params.p:
        raise ValueError(
            f"expected matrix with {params.p} columns, got shape {X.shape}"
        )
    hidden = ACTIVATIONS[params.activation](X @ params.W + params.b)
    return EnhancedMatrix(Z=np.hstack([X, hidden]), params=params)
