import numpy as np
import pytest

from grvfl import MultiViewDataset


def make_blobs_views(seed, n_samples=200, sep=4.0, dims=(2, 3), labels=("a", "b")):
    """Two Gaussian-blob views of the same samples, class centers `sep`
    standard deviations apart in every coordinate."""
    rng = np.random.default_rng(seed)
    half = n_samples // 2
    y = np.array([labels[0]] * half + [labels[1]] * (n_samples - half))
    shift = (y == labels[1]).astype(float)[:, None] * sep
    view_a = rng.normal(size=(n_samples, dims[0])) + shift
    view_b = rng.normal(size=(n_samples, dims[1])) + shift
    order = rng.permutation(n_samples)
    return view_a[order], view_b[order], y[order]


def make_random_instance(seed, l=None, n=None, m=None):
    """Small random two-view dataset with balanced binary labels."""
    rng = np.random.default_rng(seed)
    l = l if l is not None else int(rng.integers(8, 21))
    n = n if n is not None else int(rng.integers(2, 6))
    m = m if m is not None else int(rng.integers(2, 6))
    y = np.array([0] * (l // 2) + [1] * (l - l // 2))
    rng.shuffle(y)
    view_a = rng.normal(size=(l, n))
    view_b = rng.normal(size=(l, m))
    return MultiViewDataset(view_a, view_b, y, name=f"random{seed}")


@pytest.fixture
def blobs_dataset():
    view_a, view_b, y = make_blobs_views(seed=11, n_samples=120)
    return MultiViewDataset(view_a, view_b, y, name="blobs")


def write_csv(path, features, labels, header=None):
    """Write a labeled dataset the way `load_csv` reads it back."""
    lines = []
    if header is not None:
        lines.append(",".join(header))
    for row, label in zip(features, labels):
        lines.append(",".join(repr(float(v)) for v in row) + f",{label}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
