"""Estimators that turn measured output-bit pairs into entropies.

Both follow the scikit-learn estimator protocol (constructor stores
hyperparameters verbatim, ``fit`` returns ``self``, learned state ends in an
underscore), so they can be cloned, grid-searched and inspected with
``get_params`` like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .entropy import conditional_entropy


def _check_binary(X, n_columns):
    X = check_array(X, dtype=np.int64, ensure_min_samples=1)
    if X.shape[1] != n_columns:
        raise ValueError(f"expected {n_columns} columns, got {X.shape[1]}")
    return X


def _rng(random_state):
    # legacy RandomState passes through; ints, SeedSequences, Generators and None via default_rng
    if isinstance(random_state, np.random.RandomState):
        return random_state
    return np.random.default_rng(random_state)


def _joint_from_pairs(pairs: np.ndarray) -> np.ndarray:
    if np.any((pairs < 0) | (pairs > 1)):
        raise ValueError("outcomes must be 0 or 1")
    counts = np.bincount(2 * pairs[:, 0] + pairs[:, 1], minlength=4)
    return counts.reshape(2, 2) / pairs.shape[0]


def bootstrap_conditional_entropy(joint, n_samples, n_bootstrap, random_state=None):
    """Bootstrap standard error of the plug-in ``H(Y|X)``.

    Resampling ``n_samples`` categorical pairs with replacement is the same
    as a multinomial draw on the empirical table, which is what we do.
    Returns ``None`` when fewer than two samples make the spread meaningless.
    """
    if n_samples < 2 or n_bootstrap < 2:
        return None
    rng = _rng(random_state)
    p = np.asarray(joint, dtype=float).ravel()
    draws = rng.multinomial(n_samples, p / p.sum(), size=n_bootstrap)
    values = [conditional_entropy(d.reshape(2, 2) / n_samples) for d in draws]
    return float(np.std(values, ddof=1))


class ConditionalEntropyEstimator(BaseEstimator):
    """Plug-in estimate of ``H(A_k+1 | A_k)`` from ``(a_k, a_k+1)`` rows.

    Parameters
    ----------
    n_bootstrap : int, default=200
        Resamples used for ``stderr_``.
    random_state : int, RandomState or Generator, optional
        Seeds the bootstrap.

    Attributes
    ----------
    joint_ : ndarray of shape (2, 2)
        Empirical joint table.
    conditional_entropy_ : float
    stderr_ : float or None
        ``None`` flags an unreliable estimate (fewer than two samples).
    n_samples_ : int
    """

    def __init__(self, n_bootstrap=200, random_state=None):
        self.n_bootstrap = n_bootstrap
        self.random_state = random_state

    def fit(self, X, y=None):
        X = _check_binary(X, 2)
        self.n_samples_ = X.shape[0]
        self.joint_ = _joint_from_pairs(X)
        self.conditional_entropy_ = conditional_entropy(self.joint_)
        self.stderr_ = bootstrap_conditional_entropy(
            self.joint_, self.n_samples_, self.n_bootstrap, self.random_state
        )
        return self

    @property
    def stderr_reliable_(self) -> bool:
        check_is_fitted(self, "joint_")
        return self.stderr_ is not None


class TemporalBellEstimator(BaseEstimator):
    """Assemble the temporal Bell sum from randomly-timed pair measurements.

    Each row of ``X`` is one computer copy: ``(k, a_k, a_k+1)``, the step it
    was measured at and its two output bits. Rows are grouped by ``k`` and
    each group gets its own plug-in conditional entropy.

    Parameters
    ----------
    information_target : float, optional
        Bits of information the solution carries (``n`` for search over
        ``2**n`` items). Without it no verdict is formed.
    n_steps : int, optional
        If given, every step ``0 .. n_steps - 1`` must appear in ``X``.
    n_bootstrap, random_state :
        Passed to the per-step bootstrap.
    """

    def __init__(self, information_target=None, n_steps=None, n_bootstrap=200,
                 random_state=None):
        self.information_target = information_target
        self.n_steps = n_steps
        self.n_bootstrap = n_bootstrap
        self.random_state = random_state

    def fit(self, X, y=None):
        X = _check_binary(X, 3)
        ks = X[:, 0]
        if np.any(ks < 0):
            raise ValueError("step indices must be >= 0")
        if np.any(X[ks == 0, 1] != 0):
            raise ValueError("A_0 is the constant 0; rows with k=0 must have a_k=0")
        steps = np.unique(ks)
        if self.n_steps is not None:
            missing = sorted(set(range(self.n_steps)) - set(steps.tolist()))
            if missing:
                raise ValueError(f"no measurements for steps {missing[:5]}")
            if steps.max() >= self.n_steps:
                raise ValueError(f"step {steps.max()} beyond n_steps={self.n_steps}")
        rng = _rng(self.random_state)
        self.steps_ = steps
        self.joints_ = {}
        self.per_step_ = {}
        self.stderr_ = {}
        for k in steps.tolist():
            pairs = X[ks == k, 1:]
            joint = _joint_from_pairs(pairs)
            self.joints_[k] = joint
            self.per_step_[k] = conditional_entropy(joint)
            self.stderr_[k] = bootstrap_conditional_entropy(
                joint, pairs.shape[0], self.n_bootstrap, rng
            )
        self.rhs_sum_ = float(sum(self.per_step_[k] for k in steps.tolist()))
        if self.information_target is None:
            self.margin_ = None
            self.violated_ = None
        else:
            self.margin_ = float(self.information_target) - self.rhs_sum_
            self.violated_ = bool(self.rhs_sum_ < float(self.information_target) - 1e-9)
        return self
