"""Shannon entropies of finite distributions, in bits.

Distributions are plain array-likes. ``ProbDist`` is any 1-d vector of
weights, ``PairJoint`` an ``(m, m)`` (usually ``(2, 2)``) table indexed
``[x, y]``, and ``FullJoint`` a table of shape ``(2,) * m`` over ``m``
binary variables. Every public function validates its input and raises
:class:`DistributionError` on bad weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORMALIZATION_TOL = 1e-9
IDENTITY_TOL = 1e-12
MAX_FULL_JOINT_VARS = 20


class DistributionError(ValueError):
    """Raised for negative weights or weights that do not sum to one."""


def _validated(weights, name="distribution") -> np.ndarray:
    p = np.asarray(weights, dtype=float)
    if p.size == 0:
        raise DistributionError(f"{name} is empty")
    if not np.all(np.isfinite(p)):
        raise DistributionError(f"{name} has non-finite weights")
    if np.any(p < 0):
        raise DistributionError(f"{name} has negative weight {p.min()!r}")
    total = p.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise DistributionError(f"{name} sums to {total!r}, not 1")
    return p


def check_prob_dist(dist) -> np.ndarray:
    p = _validated(dist, "ProbDist")
    if p.ndim != 1:
        raise DistributionError(f"ProbDist must be 1-d, got shape {p.shape}")
    return p


def check_pair_joint(joint) -> np.ndarray:
    p = _validated(joint, "PairJoint")
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DistributionError(f"PairJoint must be square 2-d, got shape {p.shape}")
    return p


def check_full_joint(full) -> np.ndarray:
    p = _validated(full, "FullJoint")
    if p.ndim < 1 or any(d != 2 for d in p.shape):
        raise DistributionError(f"FullJoint must have shape (2,)*m, got {p.shape}")
    if p.ndim > MAX_FULL_JOINT_VARS:
        raise DistributionError(
            f"FullJoint over {p.ndim} variables exceeds cap of {MAX_FULL_JOINT_VARS}"
        )
    return p


def _plugin_bits(p: np.ndarray) -> float:
    # zero cells contribute nothing; never evaluate log2(0)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum()) + 0.0


def shannon_entropy(dist) -> float:
    """Entropy ``-sum p log2 p`` of a probability vector, with 0 log 0 = 0."""
    return _plugin_bits(check_prob_dist(dist))


def neg_x_log2_x(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"argument {x!r} outside [0, 1]")
    if x == 0.0:
        return 0.0
    return -x * math.log2(x) + 0.0


def binary_entropy(x: float) -> float:
    """Entropy of a Bernoulli(x) bit."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"probability {x!r} outside [0, 1]")
    small = min(x, 1.0 - x)
    if small == 0.0:
        return 0.0
    # log1p keeps the (1 - small) term accurate when small is ~1e-18
    return -small * math.log2(small) - (1.0 - small) * math.log1p(-small) / math.log(2.0)


def joint_entropy(joint) -> float:
    """Entropy of the flattened table; accepts PairJoint or FullJoint shapes."""
    p = np.asarray(joint, dtype=float)
    p = check_pair_joint(p) if p.ndim == 2 else check_full_joint(p)
    return _plugin_bits(p.ravel())


def conditional_entropy(joint) -> float:
    """``H(Y|X)`` for a table indexed ``[x, y]``.

    Computed as the average over rows of the row-conditional entropy rather
    than ``H(X,Y) - H(X)``, which keeps small values free of cancellation.
    The two agree to rounding; the chain-rule test holds them together.
    """
    p = check_pair_joint(joint)
    total = 0.0
    for row in p:
        mass = row.sum()
        if mass > 0:
            total += float(mass) * _plugin_bits(row / mass)
    return total


def pairwise_marginal(full, i: int, j: int) -> np.ndarray:
    """2x2 marginal table of variables ``i`` and ``j`` of a FullJoint."""
    p = check_full_joint(full)
    drop = tuple(a for a in range(p.ndim) if a not in (i, j))
    table = p.sum(axis=drop)
    return table if i < j else table.T


@dataclass(frozen=True)
class ChainBound:
    lhs: float
    rhs: float
    holds: bool


def chain_bound_check(full) -> ChainBound:
    """Compare ``H(A_0..A_m-1)`` against ``H(A_0) + sum_i H(A_i+1 | A_i)``."""
    p = check_full_joint(full)
    m = p.ndim
    if m < 2:
        raise DistributionError("chain bound needs at least two variables")
    lhs = _plugin_bits(p.ravel())
    first = p.sum(axis=tuple(range(1, m)))
    rhs = _plugin_bits(first)
    for i in range(m - 1):
        rhs += conditional_entropy(pairwise_marginal(p, i, i + 1))
    return ChainBound(lhs=lhs, rhs=rhs, holds=lhs <= rhs + IDENTITY_TOL)
