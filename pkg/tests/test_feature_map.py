import numpy as np
import pytest

from grvfl import (
    EnhancedMatrix,
    FeatureMapParams,
    activation_apply,
    derived_seed,
    enhance,
    init_feature_map,
)


def test_same_seed_reproduces_bit_identically():
    first = init_feature_map(2, 3, "sigmoid", seed=7)
    second = init_feature_map(2, 3, "sigmoid", seed=7)
    np.testing.assert_array_equal(first.W, second.W)
    np.testing.assert_array_equal(first.b, second.b)


def test_entries_stay_in_unit_interval():
    for seed in range(10):
        params = init_feature_map(4, 50, "tanh", seed=seed)
        assert np.all(params.W >= -1) and np.all(params.W <= 1)
        assert np.all(params.b >= -1) and np.all(params.b <= 1)


def test_minimal_dimensions():
    params = init_feature_map(1, 1, "relu", seed=0)
    assert params.W.shape == (1, 1) and params.b.shape == (1,)


def test_nonpositive_dimensions_rejected():
    with pytest.raises(ValueError):
        init_feature_map(0, 3, "sigmoid", seed=0)
    with pytest.raises(ValueError):
        init_feature_map(3, 0, "sigmoid", seed=0)


def test_unknown_activation_rejected():
    with pytest.raises(ValueError, match="activation"):
        init_feature_map(2, 2, "softplus", seed=0)
    with pytest.raises(ValueError, match="activation"):
        activation_apply(1.0, "softplus")


def test_activation_values():
    assert activation_apply(0.0, "sigmoid") == 0.5
    assert activation_apply(-3.0, "relu") == 0.0
    assert activation_apply(0.0, "tanh") == 0.0


def _manual_params(W, b, activation):
    W = np.asarray(W, dtype=float)
    b = np.asarray(b, dtype=float)
    return FeatureMapParams(
        W=W, b=b, activation=activation, seed=(0,), p=W.shape[0], h=W.shape[1]
    )


def test_enhance_sigmoid_at_zero():
    params = _manual_params([[0.0]], [0.0], "sigmoid")
    out = enhance(np.array([[0.0]]), params)
    assert isinstance(out, EnhancedMatrix)
    np.testing.assert_array_equal(out.Z, [[0.0, 0.5]])


def test_enhance_relu_clips_preactivation():
    params = _manual_params([[1.0]], [-2.0], "relu")
    out = enhance(np.array([[2.0]]), params)
    np.testing.assert_array_equal(out.Z, [[2.0, 0.0]])


def test_enhance_tanh_hand_value():
    params = _manual_params([[0.5], [0.5]], [0.0], "tanh")
    out = enhance(np.array([[1.0, 1.0]]), params)
    np.testing.assert_allclose(out.Z, [[1.0, 1.0, np.tanh(1.0)]], rtol=1e-15)


def test_enhance_keeps_raw_columns_bitwise():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(9, 4))
    params = init_feature_map(4, 6, "sigmoid", seed=1)
    Z = enhance(X, params).Z
    assert np.array_equal(Z[:, :4], X)
    assert Z.shape == (9, 10)


def test_enhance_is_row_wise():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(7, 3))
    params = init_feature_map(3, 5, "relu", seed=2)
    perm = rng.permutation(7)
    np.testing.assert_array_equal(
        enhance(X[perm], params).Z, enhance(X, params).Z[perm]
    )


def test_monotone_activation_preserves_order():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(20, 2))
    for tag in ("sigmoid", "tanh", "relu"):
        params = init_feature_map(2, 4, tag, seed=3)
        pre = X @ params.W + params.b
        post = enhance(X, params).Z[:, 2:]
        for j in range(4):
            order = np.argsort(pre[:, j])
            assert np.all(np.diff(post[order, j]) >= 0)


def test_enhance_dimension_mismatch():
    params = init_feature_map(3, 2, "sigmoid", seed=0)
    with pytest.raises(ValueError, match="columns"):
        enhance(np.ones((4, 2)), params)


def test_hidden_columns_in_activation_range():
    # moderate pre-activations; extreme |x| saturates sigmoid/tanh to the
    # closed endpoints in float64
    rng = np.random.default_rng(6)
    X = rng.normal(size=(15, 3))
    sig = enhance(X, init_feature_map(3, 8, "sigmoid", seed=4)).Z[:, 3:]
    assert np.all(sig > 0) and np.all(sig < 1)
    th = enhance(X, init_feature_map(3, 8, "tanh", seed=4)).Z[:, 3:]
    assert np.all(th > -1) and np.all(th < 1)
    re = enhance(X, init_feature_map(3, 8, "relu", seed=4)).Z[:, 3:]
    assert np.all(re >= 0)


def test_params_dict_roundtrip_regenerates_matrices():
    params = init_feature_map(3, 4, "tanh", seed=(11, 1))
    loaded = FeatureMapParams.from_dict(params.to_dict())
    np.testing.assert_array_equal(params.W, loaded.W)
    np.testing.assert_array_equal(params.b, loaded.b)


def test_derived_seed_is_stable():
    assert derived_seed(5, 0) == (5, 0)
    assert derived_seed((5, 0), 1) == (5, 0, 1)
    assert derived_seed(5, "view-a") == derived_seed(5, "view-a")
    assert derived_seed(5, "view-a") != derived_seed(5, "view-b")


def test_derived_seed_rejects_negative():
    with pytest.raises(ValueError):
        derived_seed(-1, 0)


def test_int_and_tuple_seeds_agree():
    np.testing.assert_array_equal(
        init_feature_map(2, 2, "sigmoid", seed=9).W,
        init_feature_map(2, 2, "sigmoid", seed=(9,)).W,
    )
