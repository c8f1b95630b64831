import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from cssx import ColumnSubsetSelector
from cssx.cssp import CsspConfig, boost
from cssx.sampling import CMode, choose_c


def test_fit_transform_keeps_k_columns(rng):
    x = rng.standard_normal((30, 12))
    sel = ColumnSubsetSelector(k=4, random_state=3).fit(x)
    assert sel.get_support().sum() == 4
    np.testing.assert_array_equal(sel.transform(x), x[:, sel.selected_])
    assert sel.n_features_in_ == 12


def test_matches_functional_api(rng):
    x = rng.standard_normal((20, 10))
    sel = ColumnSubsetSelector(k=3, n_trials=5, random_state=11).fit(x)
    ref = boost(x, CsspConfig(k=3, seed=11, boost_trials=5))
    assert tuple(sel.selected_) == ref.selected
    assert sel.relative_error() == pytest.approx(ref.residual_fro / ref.baseline_fro)
    assert sel.score(x) == pytest.approx(-ref.residual_fro)


def test_explicit_c_overrides_mode(rng):
    x = rng.standard_normal((10, 8))
    sel = ColumnSubsetSelector(k=2, c=13).fit(x)
    assert sel.result_.c_used == 13
    theory = ColumnSubsetSelector(k=1, c_mode="theoretical").fit(x)
    assert theory.result_.c_used == choose_c(1, CMode.theoretical(1.0)) == 10696


def test_params_and_clone():
    sel = ColumnSubsetSelector(k=2, alpha=6.0, prob="leverage_only")
    params = sel.get_params()
    assert params["k"] == 2 and params["alpha"] == 6.0
    other = clone(sel).set_params(k=5)
    assert other.k == 5 and sel.k == 2


def test_pipeline(rng):
    x = rng.standard_normal((25, 9))
    pipe = make_pipeline(StandardScaler(), ColumnSubsetSelector(k=3))
    assert pipe.fit_transform(x).shape == (25, 3)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ColumnSubsetSelector(k=2).transform(np.ones((3, 3)))


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        ColumnSubsetSelector(k=1).fit(np.array([[1.0, np.inf], [0.0, 1.0]]))


def test_sklearn_estimator_checks():
    from sklearn.utils.estimator_checks import check_estimator

    results = check_estimator(ColumnSubsetSelector(k=1), on_fail=None)
    failed = [r["check_name"] for r in results if r["status"] == "failed"]
    assert failed == []
