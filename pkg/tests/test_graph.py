import numpy as np
import pytest

from grvfl import (
    GraphLaplacians,
    SingularPenaltyError,
    embedding_matrix,
    enhance,
    init_feature_map,
    laplacians,
    lfda_weights,
    pairwise_affinity,
)


def brute_force_lfda(Z, labels, sigma):
    """Elementwise re-derivation of the graph weights, kept loop-based and
    independent of the vectorized implementation."""
    Z = np.asarray(Z, dtype=float)
    labels = np.asarray(labels)
    n = len(labels)
    counts = {value: int(np.sum(labels == value)) for value in np.unique(labels)}
    d_int = np.zeros((n, n))
    d_pen = np.zeros((n, n))
    for k in range(n):
        for l in range(n):
            gap = Z[k] - Z[l]
            lam = np.exp(-float(gap @ gap) / (2.0 * sigma**2))
            if labels[k] == labels[l]:
                d_int[k, l] = lam / counts[labels[k]]
                d_pen[k, l] = lam * (1.0 / n - 1.0 / counts[labels[k]])
            else:
                d_int[k, l] = 0.0
                d_pen[k, l] = 1.0 / n
    return d_int, d_pen


# ---------------------------------------------------------------- affinity

def test_affinity_identical_rows():
    Z = np.array([[1.0, 2.0], [1.0, 2.0]])
    lam = pairwise_affinity(Z, sigma=0.7)
    np.testing.assert_array_equal(lam, np.ones((2, 2)))


def test_affinity_at_two_sigma_squared():
    Z = np.array([[0.0, 0.0], [1.0, 1.0]])  # squared distance 2 = 2 sigma^2
    lam = pairwise_affinity(Z, sigma=1.0)
    np.testing.assert_allclose(lam[0, 1], np.exp(-1.0), rtol=1e-15)


def test_affinity_positive_and_bounded():
    # distances large enough to shrink lambda by ~200 orders of magnitude
    # while staying above float64 underflow
    rng = np.random.default_rng(0)
    Z = rng.normal(size=(12, 3)) * 7
    lam = pairwise_affinity(Z, sigma=1.0)
    assert np.all(lam > 0) and np.all(lam <= 1)
    assert lam.min() < 1e-40
    np.testing.assert_array_equal(np.diag(lam), np.ones(12))


def test_affinity_symmetric_bitwise():
    rng = np.random.default_rng(1)
    Z = rng.normal(size=(10, 4))
    lam = pairwise_affinity(Z, sigma=1.3)
    assert np.array_equal(lam, lam.T)


def test_affinity_rejects_nonpositive_sigma():
    with pytest.raises(ValueError):
        pairwise_affinity(np.ones((2, 2)), sigma=0.0)


# ------------------------------------------------------------- lfda weights

def test_lfda_two_samples_same_class():
    Z = np.array([[0.0], [1.0]])
    labels = np.array([0, 0])
    # a second class is required; use three samples, look at the same-class pair
    Z = np.array([[0.0], [1.0], [5.0]])
    labels = np.array([0, 0, 1])
    graphs = lfda_weights(Z, labels, sigma=1.0)
    lam01 = pairwise_affinity(Z, 1.0)[0, 1]
    np.testing.assert_allclose(graphs.delta_int[0, 1], lam01 / 2.0, rtol=1e-15)
    np.testing.assert_allclose(
        graphs.delta_pen[0, 1], lam01 * (1.0 / 3.0 - 1.0 / 2.0), rtol=1e-15
    )


def test_lfda_two_samples_different_class():
    Z = np.array([[0.0], [2.0]])
    labels = np.array([0, 1])
    graphs = lfda_weights(Z, labels, sigma=1.0)
    assert graphs.delta_int[0, 1] == 0.0
    assert graphs.delta_pen[0, 1] == 0.5
    # diagonal follows the same-class branch with lambda = 1
    np.testing.assert_allclose(graphs.delta_int[0, 0], 1.0, rtol=1e-15)


def test_lfda_four_samples_hand_values():
    Z = np.array([[0.0], [1.0], [2.0], [3.0]])
    labels = np.array(["A", "A", "B", "B"])
    graphs = lfda_weights(Z, labels, sigma=1.0)
    lam = pairwise_affinity(Z, 1.0)
    np.testing.assert_allclose(graphs.delta_int[0, 1], lam[0, 1] / 2.0, rtol=1e-15)
    assert graphs.delta_pen[0, 2] == 0.25
    np.testing.assert_allclose(
        graphs.delta_pen[0, 1], -lam[0, 1] / 4.0, rtol=1e-15
    )  # negative same-class penalty weight is intentional
    assert graphs.delta_int[0, 2] == 0.0


def test_lfda_matches_brute_force():
    rng = np.random.default_rng(2)
    for trial in range(8):
        Z = rng.normal(size=(6, 3))
        labels = np.array([0, 0, 0, 1, 1, 1])
        rng.shuffle(labels)
        sigma = float(rng.uniform(0.5, 2.0))
        graphs = lfda_weights(Z, labels, sigma)
        ref_int, ref_pen = brute_force_lfda(Z, labels, sigma)
        np.testing.assert_allclose(graphs.delta_int, ref_int, atol=1e-14)
        np.testing.assert_allclose(graphs.delta_pen, ref_pen, atol=1e-14)


def test_lfda_weight_matrices_symmetric():
    rng = np.random.default_rng(3)
    Z = rng.normal(size=(8, 2))
    labels = np.array([0, 1, 0, 1, 0, 1, 0, 1])
    graphs = lfda_weights(Z, labels, sigma=1.0)
    assert np.array_equal(graphs.delta_int, graphs.delta_int.T)
    assert np.array_equal(graphs.delta_pen, graphs.delta_pen.T)


def test_lfda_rejects_nonbinary():
    with pytest.raises(ValueError, match="binary"):
        lfda_weights(np.ones((3, 1)), np.array([0, 1, 2]), sigma=1.0)


# -------------------------------------------------------------- laplacians

def test_laplacian_two_node_example():
    from grvfl import LfdaGraphs

    delta = np.array([[0.0, 1.0], [1.0, 0.0]])
    lap = laplacians(LfdaGraphs(delta_int=delta, delta_pen=delta, sigma=1.0))
    np.testing.assert_array_equal(lap.L, [[1.0, -1.0], [-1.0, 1.0]])
    np.testing.assert_array_equal(lap.U, lap.L)


def test_laplacian_rows_sum_to_zero():
    rng = np.random.default_rng(4)
    Z = rng.normal(size=(9, 3))
    labels = np.array([0, 0, 0, 0, 1, 1, 1, 1, 1])
    lap = laplacians(lfda_weights(Z, labels, sigma=1.0))
    assert np.abs(lap.L.sum(axis=1)).max() <= 1e-9
    assert np.abs(lap.U.sum(axis=1)).max() <= 1e-9


def test_laplacian_zero_graph():
    from grvfl import LfdaGraphs

    zero = np.zeros((3, 3))
    lap = laplacians(LfdaGraphs(delta_int=zero, delta_pen=zero, sigma=1.0))
    np.testing.assert_array_equal(lap.L, zero)


def test_intrinsic_laplacian_is_psd():
    rng = np.random.default_rng(5)
    for trial in range(6):
        Z = rng.normal(size=(10, 2))
        labels = rng.integers(0, 2, size=10)
        if np.unique(labels).size < 2:
            labels[0] = 1 - labels[0]
        lap = laplacians(lfda_weights(Z, labels, sigma=1.0))
        assert np.linalg.eigvalsh(lap.L).min() >= -1e-9


# -------------------------------------------------------- embedding matrix

def test_embedding_identity_penalty_returns_intrinsic():
    rng = np.random.default_rng(6)
    A = rng.normal(size=(4, 4))
    A = (A + A.T) / 2.0
    lap = GraphLaplacians(L=A, U=np.eye(4))
    emb = embedding_matrix(np.eye(4), lap)
    np.testing.assert_allclose(emb.G, A, atol=1e-14)
    assert emb.ridge_used == 0.0


def test_embedding_scaled_penalty_halves():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(4, 4))
    A = (A + A.T) / 2.0
    lap = GraphLaplacians(L=A, U=2.0 * np.eye(4))
    emb = embedding_matrix(np.eye(4), lap)
    np.testing.assert_allclose(emb.G, A / 2.0, atol=1e-14)


def test_embedding_matches_explicit_inverse():
    rng = np.random.default_rng(8)
    root = rng.normal(size=(4, 4))
    penalty = root @ root.T + 4.0 * np.eye(4)  # SPD
    intrinsic = rng.normal(size=(4, 4))
    intrinsic = (intrinsic + intrinsic.T) / 2.0
    lap = GraphLaplacians(L=intrinsic, U=penalty)
    emb = embedding_matrix(np.eye(4), lap)
    reference = np.linalg.inv(penalty) @ intrinsic
    reference = (reference + reference.T) / 2.0
    np.testing.assert_allclose(
        emb.G, reference, rtol=1e-10, atol=1e-10 * np.abs(reference).max()
    )


def test_embedding_exactly_symmetric():
    rng = np.random.default_rng(9)
    Z = rng.normal(size=(12, 5))
    labels = np.array([0, 1] * 6)
    emb = embedding_matrix(Z, laplacians(lfda_weights(Z, labels, sigma=1.0)))
    assert np.array_equal(emb.G, emb.G.T)


def test_embedding_invariant_to_sample_permutation():
    rng = np.random.default_rng(10)
    Z = rng.normal(size=(10, 4))
    labels = np.array([0, 0, 0, 0, 0, 1, 1, 1, 1, 1])
    emb = embedding_matrix(Z, laplacians(lfda_weights(Z, labels, sigma=1.0)))
    perm = rng.permutation(10)
    emb_perm = embedding_matrix(
        Z[perm], laplacians(lfda_weights(Z[perm], labels[perm], sigma=1.0))
    )
    np.testing.assert_allclose(emb.G, emb_perm.G, atol=1e-9)


def test_embedding_escalates_ridge_on_exact_singularity():
    # diag(1, 1, 0) penalty cannot reproduce the identity intrinsic matrix,
    # so the plain solve fails and the ridge must take over
    lap = GraphLaplacians(L=np.eye(3), U=np.diag([1.0, 1.0, 0.0]))
    emb = embedding_matrix(np.eye(3), lap)
    assert emb.ridge_used > 0.0
    assert np.all(np.isfinite(emb.G))
    r = emb.ridge_used
    np.testing.assert_allclose(
        np.diag(emb.G), [1 / (1 + r), 1 / (1 + r), 1 / r], rtol=1e-12
    )


def test_embedding_handles_rank_deficient_enhanced_matrix():
    # more feature columns than samples: the penalty Gram is rank deficient,
    # yet the embedding must come back finite (plain solve or ridge)
    rng = np.random.default_rng(11)
    X = rng.normal(size=(4, 2))
    labels = np.array([0, 0, 1, 1])
    Z = enhance(X, init_feature_map(2, 6, "sigmoid", seed=1)).Z
    emb = embedding_matrix(Z, laplacians(lfda_weights(Z, labels, sigma=1.0)))
    assert np.all(np.isfinite(emb.G))
    assert np.array_equal(emb.G, emb.G.T)


def test_embedding_unresolvable_singularity_names_view():
    lap = GraphLaplacians(L=np.eye(3), U=np.zeros((3, 3)))
    with pytest.raises(SingularPenaltyError, match="view-b"):
        embedding_matrix(np.eye(3), lap, view_name="view-b")


def test_embedding_rejects_negative_ridge():
    lap = GraphLaplacians(L=np.eye(2), U=np.eye(2))
    with pytest.raises(ValueError):
        embedding_matrix(np.eye(2), lap, ridge=-1.0)


def test_penalty_row_sums_match_direct_summation():
    rng = np.random.default_rng(12)
    for trial in range(5):
        Z = rng.normal(size=(6, 2))
        labels = np.array([0, 0, 1, 1, 1, 0])
        graphs = lfda_weights(Z, labels, sigma=1.0)
        ref_int, ref_pen = brute_force_lfda(Z, labels, sigma=1.0)
        np.testing.assert_allclose(
            graphs.delta_pen.sum(axis=1), ref_pen.sum(axis=1), atol=1e-12
        )
