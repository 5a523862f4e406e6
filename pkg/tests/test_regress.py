"""Engine oracles: LR, KNN, DTR, RFR and SVR against independent references."""

import warnings

import numpy as np
import pytest

from helpers import exhaustive_tree_sse

from scoreline.regress import (
    DimensionMismatch,
    ForestModel,
    KTooLarge,
    NotConvergedWarning,
    SchemaMismatch,
    TooFewRows,
    TreeNode,
    fit_dtr,
    fit_knn,
    fit_lr,
    fit_model,
    fit_rfr,
    fit_svr,
    load_model,
    save_model,
    standardize_apply,
    standardize_fit,
)
from scoreline.regress.tree import walk_tree

# --------------------------------------------------------- standardization


def test_standardize_two_points():
    scaler = standardize_fit(np.array([[1.0], [3.0]]))
    out = standardize_apply(scaler, np.array([[1.0], [3.0]]))
    np.testing.assert_array_equal(out[:, 0], [-1.0, 1.0])


def test_standardize_constant_column():
    X = np.array([[2.0, 1.0], [2.0, 3.0], [2.0, 5.0]])
    out = standardize_apply(standardize_fit(X), X)
    np.testing.assert_array_equal(out[:, 0], [0.0, 0.0, 0.0])


def test_standardize_recenters():
    rng = np.random.default_rng(3)
    X = rng.normal(loc=5.0, scale=9.0, size=(60, 4))
    out = standardize_apply(standardize_fit(X), X)
    assert np.abs(out.mean(axis=0)).max() < 1e-12
    np.testing.assert_allclose(out.std(axis=0), 1.0, atol=1e-12)


# ------------------------------------------------------------------------ LR


def test_lr_recovers_line():
    x = np.linspace(-3, 3, 25)
    model = fit_lr(x.reshape(-1, 1), 2.0 * x + 1.0)
    assert abs(model.coef[0] - 2.0) < 1e-6
    assert abs(model.intercept - 1.0) < 1e-6
    assert not model.ridged
    assert abs(model.predict(np.array([[10.0]]))[0] - 21.0) < 1e-5


def test_lr_orthogonal_residuals():
    """Normal-equation oracle: residuals orthogonal to every column."""
    rng = np.random.default_rng(11)
    X = rng.normal(size=(20, 5))
    y = rng.normal(size=20)
    model = fit_lr(X, y)
    residual = y - model.predict(X)
    assert np.abs(X.T @ residual).max() < 1e-6
    assert abs(residual.sum()) < 1e-6  # intercept column too


def test_lr_matches_lstsq():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(30, 4))
    y = X @ np.array([0.5, -1.0, 2.0, 0.0]) + 0.7 + rng.normal(scale=0.1, size=30)
    model = fit_lr(X, y)
    Xa = np.hstack([X, np.ones((30, 1))])
    ref, *_ = np.linalg.lstsq(Xa, y, rcond=None)
    np.testing.assert_allclose(np.append(model.coef, model.intercept), ref,
                               atol=1e-8)


def test_lr_wide_matrix_ridge_fallback():
    """Players-style matrix, more columns than rows: ridged but finite."""
    rng = np.random.default_rng(13)
    X = rng.choice([-1.0, 0.0, 1.0], size=(8, 30))
    y = rng.normal(size=8)
    model = fit_lr(X, y)
    assert model.ridged
    assert np.isfinite(model.coef).all() and np.isfinite(model.intercept)
    assert np.isfinite(model.predict(X)).all()


def test_lr_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fit_lr(np.ones((4, 2)), np.ones(5))


# ----------------------------------------------------------------------- KNN


def test_knn_identity_neighbour():
    rng = np.random.default_rng(21)
    X = rng.normal(size=(12, 3))
    y = rng.normal(size=12)
    model = fit_knn(X, y, k=1)
    np.testing.assert_allclose(model.predict(X), y, atol=1e-12)


def test_knn_mean_of_three():
    X = np.array([[0.0], [1.0], [2.0], [50.0]])
    y = np.array([0.0, 1.0, 2.0, 100.0])
    model = fit_knn(X, y, k=3)
    assert model.predict(np.array([[1.0]]))[0] == pytest.approx(1.0)


def test_knn_brute_force_oracle():
    """k=5 against an exhaustive distance sort on standardized features."""
    rng = np.random.default_rng(22)
    X = rng.normal(size=(40, 6)) * np.array([1, 10, 0.1, 5, 2, 1])
    y = rng.normal(size=40)
    queries = rng.normal(size=(15, 6)) * np.array([1, 10, 0.1, 5, 2, 1])
    model = fit_knn(X, y, k=5)

    scaler = standardize_fit(X)
    Xs = standardize_apply(scaler, X)
    Qs = standardize_apply(scaler, queries)
    expected = []
    for q in Qs:
        d = np.sqrt(((Xs - q) ** 2).sum(axis=1))
        idx = np.argsort(d, kind="stable")[:5]  # ties to the lower row index
        expected.append(y[idx].mean())
    np.testing.assert_allclose(model.predict(queries), expected, atol=1e-9)


def test_knn_distance_tie_breaks_low_index():
    X = np.array([[0.0], [2.0], [-2.0], [4.0]])  # rows 1 and 2 equidistant from 0
    y = np.array([10.0, 1.0, 2.0, 3.0])
    model = fit_knn(X, y, k=2)
    # neighbours of the origin query: row 0 (d=0) then row 1 (tie with 2)
    assert model.predict(np.array([[0.0]]))[0] == pytest.approx((10.0 + 1.0) / 2)


def test_knn_k_too_large():
    with pytest.raises(KTooLarge):
        fit_knn(np.ones((3, 2)), np.ones(3), k=4)


# ----------------------------------------------------------------------- DTR


def test_dtr_pure_split_at_midpoint():
    X = np.array([[0.0], [0.25], [0.75], [1.0]])
    y = np.array([0.0, 0.0, 2.0, 2.0])
    model = fit_dtr(X, y, max_depth=3, min_leaf=1)
    root = model.root
    assert root.feature == 0
    assert root.threshold == pytest.approx(0.5)
    assert root.left.is_leaf and root.left.value == 0.0
    assert root.right.is_leaf and root.right.value == 2.0
    np.testing.assert_array_equal(model.predict(X), y)


def test_dtr_constant_target_single_leaf():
    X = np.arange(10.0).reshape(-1, 1)
    y = np.full(10, 3.5)
    model = fit_dtr(X, y, max_depth=4, min_leaf=1)
    assert model.root.is_leaf
    assert model.root.value == 3.5


def test_dtr_too_few_rows():
    with pytest.raises(TooFewRows):
        fit_dtr(np.ones((9, 2)), np.ones(9), min_leaf=5)


def train_sse(model, X, y):
    return sse_residual(model.predict(X), y)


def sse_residual(pred, y):
    return float(((pred - y) ** 2).sum())


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_dtr_matches_exhaustive_search(seed):
    """Tree SSE equals exhaustive split search on small instances."""
    rng = np.random.default_rng(seed)
    n = rng.integers(6, 13)
    X = np.round(rng.normal(size=(n, 3)), 2)
    y = np.round(rng.normal(size=n), 2)
    for max_depth, min_leaf in [(1, 1), (2, 1), (2, 2), (3, 1)]:
        model = fit_dtr(X, y, max_depth=max_depth, min_leaf=min_leaf)
        expected = exhaustive_tree_sse(X, y, np.arange(n), 0, max_depth, min_leaf)
        got = train_sse(model, X, y)
        assert got == pytest.approx(expected, abs=1e-9), (max_depth, min_leaf)


def test_dtr_split_tie_breaks_lowest_feature():
    # identical split quality on both columns; column 0 must win
    X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
    y = np.array([0.0, 0.0, 4.0, 4.0])
    model = fit_dtr(X, y, max_depth=1, min_leaf=1)
    assert model.root.feature == 0


def test_dtr_sse_non_increasing_in_depth():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(60, 4))
    y = rng.normal(size=60)
    previous = np.inf
    for depth in range(1, 7):
        model = fit_dtr(X, y, max_depth=depth, min_leaf=2)
        current = train_sse(model, X, y)
        assert current <= previous + 1e-12
        previous = current


def test_dtr_min_leaf_respected():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(30, 2))
    y = rng.normal(size=30)
    model = fit_dtr(X, y, max_depth=8, min_leaf=5)

    def walk(node):
        if node.is_leaf:
            assert node.n >= 5
            return
        walk(node.left)
        walk(node.right)

    walk(model.root)


# ----------------------------------------------------------------------- RFR


def test_rfr_ensemble_mean_golden():
    """Five stub trees predicting 0.8/1.2/1.5/0.9/1.1 average to 1.1."""
    roots = [TreeNode(feature=-1, threshold=0.0, value=v, n=1)
             for v in (0.8, 1.2, 1.5, 0.9, 1.1)]
    forest = ForestModel(roots, n_features=1, params={})
    out = forest.predict(np.array([[0.0]]))
    assert out[0] == pytest.approx(1.1)

    from scoreline.predict import round_goals
    assert round_goals(out[0]) == 1


def test_rfr_degenerates_to_dtr():
    rng = np.random.default_rng(31)
    X = rng.normal(size=(40, 5))
    y = rng.normal(size=40)
    tree = fit_dtr(X, y, max_depth=4, min_leaf=2)
    forest = fit_rfr(X, y, n_trees=1, max_depth=4, min_leaf=2,
                     max_features="all", bootstrap=False, seed=123)
    queries = rng.normal(size=(25, 5))
    np.testing.assert_array_equal(forest.predict(queries), tree.predict(queries))


def test_rfr_deterministic_given_seed():
    rng = np.random.default_rng(32)
    X = rng.normal(size=(50, 6))
    y = rng.normal(size=50)
    queries = rng.normal(size=(20, 6))
    a = fit_rfr(X, y, n_trees=12, seed=7, min_leaf=2)
    b = fit_rfr(X, y, n_trees=12, seed=7, min_leaf=2)
    np.testing.assert_array_equal(a.predict(queries), b.predict(queries))


def test_rfr_bootstrap_and_subsets_change_trees():
    rng = np.random.default_rng(33)
    X = rng.normal(size=(50, 6))
    y = rng.normal(size=50)
    forest = fit_rfr(X, y, n_trees=8, seed=7, min_leaf=2)
    single = [walk_tree(root, X) for root in forest.roots]
    assert any(not np.array_equal(single[0], other) for other in single[1:])


def test_rfr_param_validation():
    X, y = np.ones((12, 2)), np.ones(12)
    with pytest.raises(ValueError):
        fit_rfr(X, y, n_trees=0)
    with pytest.raises(ValueError):
        fit_rfr(X, y, bootstrap_fraction=0.0)
    with pytest.raises(ValueError):
        fit_rfr(X, y, max_features=9)


# ----------------------------------------------------------------------- SVR


def test_svr_flat_tube():
    rng = np.random.default_rng(41)
    X = rng.normal(size=(25, 3))
    y = np.full(25, 2.0)
    model = fit_svr(X, y, C=1.0, epsilon=0.1)
    assert np.abs(model.w).max() < 1e-9
    assert model.b == pytest.approx(2.0, abs=1e-9)
    np.testing.assert_allclose(model.predict(X), y, atol=1e-9)
    assert model.status["converged"]


def test_svr_slope_recovery():
    """y = 3x noiseless with a tight tube: slope within 0.05 of 3."""
    rng = np.random.default_rng(7)
    x = rng.uniform(-2, 2, size=40)
    y = 3.0 * x
    model = fit_svr(x.reshape(-1, 1), y, C=10.0, epsilon=0.01)
    slope = (model.predict(np.array([[1.0]]))
             - model.predict(np.array([[0.0]])))[0]
    assert abs(slope - 3.0) < 0.05


def test_svr_reference_objective_oracle():
    """Final objective within 1% of a slow reference at 10x iterations."""
    rng = np.random.default_rng(42)
    X = rng.normal(size=(30, 4))
    y = X @ np.array([1.0, -2.0, 0.5, 0.0]) + 1.5 + rng.normal(scale=0.3, size=30)
    C, eps, iters = 1.0, 0.1, 2000
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotConvergedWarning)
        model = fit_svr(X, y, C=C, epsilon=eps, max_iter=iters, tol=0.0)

    # independent subgradient reference on the same standardized features
    mean, std = X.mean(axis=0), X.std(axis=0)
    Xs = (X - mean) / np.where(std == 0.0, 1.0, std)

    def objective(w, b):
        r = y - (Xs @ w + b)
        return 0.5 * float(w @ w) + C * float(np.maximum(0.0, np.abs(r) - eps).sum())

    w = np.zeros(4)
    b = float(y.mean())
    best = objective(w, b)
    for it in range(1, 10 * iters + 1):
        r = y - (Xs @ w + b)
        s = np.sign(r) * (np.abs(r) > eps)
        w = w - (0.5 / np.sqrt(it)) * (w - C * (Xs.T @ s)) / 30
        b = b - (0.5 / np.sqrt(it)) * (-C * s.sum()) / 30
        best = min(best, objective(w, b))
    engine = objective(model.w, model.b)
    assert abs(engine - best) <= 0.01 * best


def test_svr_affine_rescaling_invariance():
    """Standardization first makes raw-feature scale and shift irrelevant."""
    rng = np.random.default_rng(43)
    X = rng.normal(size=(30, 3))
    y = X @ np.array([1.0, 0.5, -1.0]) + rng.normal(scale=0.2, size=30)
    scale = np.array([3.7, 0.02, 11.0])
    shift = np.array([-2.0, 5.0, 0.3])
    a = fit_svr(X, y, C=2.0, epsilon=0.05)
    b = fit_svr(X * scale + shift, y, C=2.0, epsilon=0.05)
    queries = rng.normal(size=(10, 3))
    np.testing.assert_allclose(a.predict(queries),
                               b.predict(queries * scale + shift), atol=1e-9)


def test_svr_not_converged_is_warning():
    rng = np.random.default_rng(44)
    X = rng.normal(size=(20, 2))
    y = rng.normal(size=20)
    with pytest.warns(NotConvergedWarning):
        model = fit_svr(X, y, max_iter=5)
    assert not model.status["converged"]
    assert np.isfinite(model.predict(X)).all()  # still usable


def test_svr_rbf_fits_nonlinear_shape():
    rng = np.random.default_rng(45)
    x = np.linspace(-2, 2, 40)
    y = x ** 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotConvergedWarning)
        linear = fit_svr(x.reshape(-1, 1), y, C=10.0, epsilon=0.01)
        rbf = fit_svr(x.reshape(-1, 1), y, C=10.0, epsilon=0.01, kernel="rbf")
    lin_mae = np.abs(linear.predict(x.reshape(-1, 1)) - y).mean()
    rbf_mae = np.abs(rbf.predict(x.reshape(-1, 1)) - y).mean()
    assert rbf_mae < lin_mae / 2


def test_svr_validation():
    X, y = np.ones((5, 2)), np.ones(5)
    with pytest.raises(TooFewRows):
        fit_svr(np.ones((1, 2)), np.ones(1))
    with pytest.raises(ValueError):
        fit_svr(X, y, C=0.0)
    with pytest.raises(ValueError):
        fit_svr(X, y, epsilon=-0.1)
    with pytest.raises(ValueError):
        fit_svr(X, y, kernel="poly")


# ---------------------------------------------------------------- contract


def fitted_models():
    rng = np.random.default_rng(50)
    X = rng.normal(size=(30, 4))
    y = rng.normal(size=30)
    names = tuple(f"f{i}" for i in range(4))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotConvergedWarning)
        models = [
            fit_lr(X, y, feature_names=names),
            fit_knn(X, y, k=3, feature_names=names),
            fit_dtr(X, y, max_depth=3, min_leaf=2, feature_names=names),
            fit_rfr(X, y, n_trees=5, min_leaf=2, seed=1, feature_names=names),
            fit_svr(X, y, max_iter=500, feature_names=names),
            fit_svr(X, y, max_iter=500, kernel="rbf", feature_names=names),
        ]
    return models, X, y


def test_predict_finite_and_shaped():
    models, X, _y = fitted_models()
    for model in models:
        out = model.predict(X)
        assert out.shape == (30,)
        assert np.isfinite(out).all()


def test_predict_rejects_wrong_width():
    models, _X, _y = fitted_models()
    for model in models:
        with pytest.raises(SchemaMismatch):
            model.predict(np.ones((3, 9)))


def test_engines_deterministic():
    """Same data, hyperparameters and seed give bitwise-equal predictions."""
    first, X, _ = fitted_models()
    second, _, _ = fitted_models()
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a.predict(X), b.predict(X))


def test_fit_model_dispatcher():
    rng = np.random.default_rng(51)
    X = rng.normal(size=(20, 3))
    y = rng.normal(size=20)
    model = fit_model("knn", X, y, {"k": 2})
    assert model.technique == "knn"
    with pytest.raises(ValueError):
        fit_model("mlp", X, y)


# -------------------------------------------------------------- store


def test_store_roundtrip_all_engines(tmp_path):
    models, X, _y = fitted_models()
    for i, model in enumerate(models):
        path = tmp_path / f"m{i}.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.technique == model.technique
        np.testing.assert_array_equal(loaded.predict(X), model.predict(X))


def test_store_rejects_unknown_version(tmp_path):
    import json

    from scoreline.regress import UnsupportedVersion

    models, _X, _y = fitted_models()
    path = tmp_path / "m.json"
    save_model(models[0], path)
    blob = json.loads(path.read_text())
    blob["format_version"] = 99
    path.write_text(json.dumps(blob))
    with pytest.raises(UnsupportedVersion):
        load_model(path)


def test_store_rejects_garbage(tmp_path):
    from scoreline.regress import BadArtifact

    path = tmp_path / "m.json"
    path.write_text("{not json")
    with pytest.raises(BadArtifact):
        load_model(path)
