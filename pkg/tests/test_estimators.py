import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import StandardScaler

from spdiversity.estimators import SolowPolaskySelector
from spdiversity.exceptions import BudgetExceededError

X_TRIANGLE = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 2.25]])


def test_fit_sets_attributes():
    sel = SolowPolaskySelector(k=2, theta0=1.0).fit(X_TRIANGLE)
    assert sel.indices_ == (1, 2)
    assert sel.sp_value_ == pytest.approx(1.954045, abs=1e-6)
    assert sel.all_optima_ == ((1, 2),)
    assert sel.evaluated_ == 3
    assert sel.n_points_ == 3
    assert sel.n_features_in_ == 2


def test_get_params_round_trip():
    sel = SolowPolaskySelector(k=3, theta0=0.5, method="greedy", workers=4)
    params = sel.get_params()
    assert params["k"] == 3
    assert params["theta0"] == 0.5
    assert params["method"] == "greedy"
    assert params["workers"] == 4
    other = SolowPolaskySelector().set_params(**params)
    assert other.get_params() == params


def test_clone_preserves_params():
    sel = SolowPolaskySelector(k=4, theta0=2.0, tie_tol=1e-6)
    cloned = clone(sel)
    assert cloned.get_params() == sel.get_params()
    assert not hasattr(cloned, "indices_")


def test_transform_selects_rows():
    sel = SolowPolaskySelector(k=2).fit(X_TRIANGLE)
    out = sel.transform(X_TRIANGLE)
    np.testing.assert_array_equal(out, X_TRIANGLE[[1, 2]])
    with pytest.raises(ValueError, match="rows"):
        sel.transform(X_TRIANGLE[:2])


def test_fit_transform_shortcut():
    out = SolowPolaskySelector(k=2).fit_transform(X_TRIANGLE)
    np.testing.assert_array_equal(out, X_TRIANGLE[[1, 2]])


def test_get_support_mask_and_indices():
    sel = SolowPolaskySelector(k=2).fit(X_TRIANGLE)
    np.testing.assert_array_equal(sel.get_support(), [False, True, True])
    np.testing.assert_array_equal(sel.get_support(indices=True), [1, 2])


def test_unfitted_raises():
    sel = SolowPolaskySelector()
    with pytest.raises(NotFittedError):
        sel.transform(X_TRIANGLE)
    with pytest.raises(NotFittedError):
        sel.get_support()


def test_greedy_method():
    sel = SolowPolaskySelector(k=2, method="greedy").fit(X_TRIANGLE)
    assert sel.indices_ == (1, 2)
    assert sel.evaluated_ is None
    assert sel.all_optima_ == ((1, 2),)


def test_invalid_method():
    with pytest.raises(ValueError, match="method"):
        SolowPolaskySelector(method="magic").fit(X_TRIANGLE)


def test_invalid_theta0_and_k():
    with pytest.raises(ValueError):
        SolowPolaskySelector(theta0=0.0).fit(X_TRIANGLE)
    with pytest.raises(ValueError):
        SolowPolaskySelector(k=9).fit(X_TRIANGLE)


def test_duplicate_rows_rejected():
    X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValueError, match="coincide"):
        SolowPolaskySelector(k=2).fit(X)


def test_input_shape_validation():
    with pytest.raises(ValueError):
        SolowPolaskySelector().fit(np.ones((3, 3)))
    with pytest.raises(ValueError):
        SolowPolaskySelector().fit(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        SolowPolaskySelector().fit(np.array([[0.0, np.nan], [1.0, 0.0]]))


def test_budget_propagates():
    rng = np.random.default_rng(97)
    X = rng.uniform(0.0, 5.0, size=(8, 2))
    with pytest.raises(BudgetExceededError):
        SolowPolaskySelector(k=4, budget=10).fit(X)


def test_exact_matches_greedy_value_ordering():
    rng = np.random.default_rng(101)
    X = rng.uniform(0.0, 4.0, size=(7, 2))
    exact = SolowPolaskySelector(k=3).fit(X)
    greedy = SolowPolaskySelector(k=3, method="greedy").fit(X)
    assert greedy.sp_value_ <= exact.sp_value_ + 1e-12


def test_pipeline_compatibility():
    pipe = Pipeline(
        [("scale", StandardScaler()), ("select", SolowPolaskySelector(k=2))]
    )
    out = pipe.fit_transform(X_TRIANGLE)
    assert out.shape == (2, 2)
    assert pipe.named_steps["select"].indices_ == (1, 2)
