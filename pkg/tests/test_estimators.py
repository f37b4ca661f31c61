import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from tbell.estimators import ConditionalEntropyEstimator, TemporalBellEstimator


def test_get_set_params_and_clone():
    est = ConditionalEntropyEstimator(n_bootstrap=50, random_state=3)
    assert est.get_params() == {"n_bootstrap": 50, "random_state": 3}
    twin = clone(est).set_params(n_bootstrap=10)
    assert twin.n_bootstrap == 10 and est.n_bootstrap == 50
    bell = TemporalBellEstimator(information_target=4, n_steps=2)
    assert clone(bell).get_params()["information_target"] == 4


def test_fit_returns_self_and_estimates():
    X = np.array([[0, 0]] * 6 + [[0, 1]] * 2 + [[1, 1]] * 2)
    est = ConditionalEntropyEstimator(random_state=0)
    assert est.fit(X) is est
    np.testing.assert_allclose(est.joint_, [[0.6, 0.2], [0.0, 0.2]])
    # 0.8 * H(1/4), rows with a_k=1 are deterministic
    h = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
    assert est.conditional_entropy_ == pytest.approx(0.8 * h, abs=1e-12)
    assert est.stderr_ > 0 and est.stderr_reliable_


def test_single_sample_flags_stderr():
    est = ConditionalEntropyEstimator().fit([[1, 0]])
    assert est.conditional_entropy_ == 0
    assert est.stderr_ is None and not est.stderr_reliable_


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ConditionalEntropyEstimator().stderr_reliable_


@pytest.mark.parametrize("X", [[[0, 2]], [[0, 1, 1]], np.empty((0, 2))])
def test_input_validation(X):
    with pytest.raises(ValueError):
        ConditionalEntropyEstimator().fit(X)


def test_bootstrap_is_seeded():
    rng = np.random.default_rng(0)
    X = rng.integers(0, 2, size=(500, 2))
    a = ConditionalEntropyEstimator(random_state=9).fit(X).stderr_
    b = ConditionalEntropyEstimator(random_state=9).fit(X).stderr_
    assert a == b


def test_temporal_bell_estimator():
    rows = np.array([[0, 0, 0], [0, 0, 1], [1, 0, 1], [1, 1, 0], [1, 0, 0], [1, 1, 1]])
    est = TemporalBellEstimator(information_target=2, n_steps=2, random_state=0).fit(rows)
    assert est.per_step_[0] == pytest.approx(1.0)
    assert est.per_step_[1] == pytest.approx(1.0)
    assert est.rhs_sum_ == pytest.approx(2.0)
    assert not est.violated_
    assert TemporalBellEstimator().fit(rows).violated_ is None


def test_temporal_bell_estimator_errors():
    with pytest.raises(ValueError, match="A_0"):
        TemporalBellEstimator().fit([[0, 1, 0]])
    with pytest.raises(ValueError, match="no measurements"):
        TemporalBellEstimator(n_steps=3).fit([[0, 0, 0], [1, 0, 0]])
    with pytest.raises(ValueError, match="beyond"):
        TemporalBellEstimator(n_steps=1).fit([[0, 0, 0], [1, 0, 0]])
    with pytest.raises(ValueError):
        TemporalBellEstimator().fit([[-1, 0, 0]])
