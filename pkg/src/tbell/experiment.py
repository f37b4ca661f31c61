"""Pairwise output-bit statistics of measured Grover runs and the inequality verdict.

Step indexing: iteration ``k = 1`` is the first Grover iteration and
``A_k`` is the output bit measured right after its first oracle call.
``A_0`` is the constant 0 the output bit holds before any query. The
temporal Bell sum over an iteration budget ``L`` is
``H(A_1|A_0) + H(A_2|A_1) + ... + H(A_L|A_L-1)``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import classical, qsim
from .entropy import binary_entropy, conditional_entropy
from .estimators import ConditionalEntropyEstimator, TemporalBellEstimator

VARIANTS = ("standard", "halt_on_hit")
MODES = ("analytic", "exact", "monte_carlo")
POLICIES = ("ceil_sqrt", "grover_optimal")

MIN_N, MAX_N = 3, qsim.SUBSPACE_MAX_N
EXACT_MAX_L = 2**16
MONTE_CARLO_MAX_L = 2**12
CLASSICAL_BASELINE_MAX_N = 12
DEFAULT_SEED = 20061120
VIOLATION_TOL = 1e-9
_U64 = 2**64


def default_seed() -> int:
    raw = os.environ.get("TBL_SEED")
    return int(raw) % _U64 if raw else DEFAULT_SEED


def _canonical(name: str, allowed: Sequence[str], what: str) -> str:
    key = name.replace("-", "_")
    if key not in allowed:
        raise ValueError(f"unknown {what} {name!r}; choose from {', '.join(allowed)}")
    return key


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    L: int | None = None
    mode: str = "exact"
    samples: int = 100_000
    seed: int = field(default_factory=default_seed)
    variant: str = "standard"

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or not MIN_N <= self.n <= MAX_N:
            raise ValueError(f"n must be an integer in [{MIN_N}, {MAX_N}], got {self.n!r}")
        if self.L is None:
            object.__setattr__(self, "L", iteration_budget(self.n, "ceil_sqrt"))
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        object.__setattr__(self, "mode", _canonical(self.mode, MODES, "mode"))
        object.__setattr__(self, "variant", _canonical(self.variant, VARIANTS, "variant"))
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < _U64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode == "exact" and self.L > EXACT_MAX_L:
            raise ValueError(f"exact mode supports L <= {EXACT_MAX_L}, got {self.L}")
        if self.mode == "monte_carlo" and self.L > MONTE_CARLO_MAX_L:
            raise ValueError(f"monte_carlo mode supports L <= {MONTE_CARLO_MAX_L}, got {self.L}")


@dataclass(frozen=True)
class PairDistribution:
    k: int
    joint: np.ndarray
    source: str  # "exact_branch" or "sampled"
    stderr: float | None = None
    samples: int | None = None

    @property
    def conditional_entropy(self) -> float:
        return conditional_entropy(self.joint)

    @property
    def p_first_one(self) -> float:
        return float(self.joint[1].sum())

    def conditional_one(self, first: int) -> float:
        """``P(A_k+1 = 1 | A_k = first)``; nan when the condition has no mass."""
        row = self.joint[first]
        return float(row[1] / row.sum()) if row.sum() > 0 else math.nan


@dataclass
class InequalityReport:
    n: int
    L: int
    information_target: float
    per_step: list[float]
    rhs_sum: float
    violated: bool
    margin: float
    paper_bound: float | None
    success_probability: float | None
    policy: str | None = None
    kind: str = "quantum"
    method: str = "analytic"
    classical_rhs_sum: float | None = None
    joint_entropy: float | None = None
    oracle_calls: int | None = None


# --- step budgets and closed forms -----------------------------------------

def iteration_budget(n: int, policy: str = "ceil_sqrt") -> int:
    policy = _canonical(policy, POLICIES, "policy")
    size = 2**n
    if policy == "ceil_sqrt":
        return math.isqrt(size - 1) + 1
    return max(1, round(math.pi / 4 * math.sqrt(size)))


def analytic_pair_conditional_entropy(n: int, k: int) -> float:
    """Closed form of ``H(A_k+1 | A_k)``: ``H(cos^2(theta/2))`` at ``k=0``,
    ``H(cos^2 theta)`` for every later step."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    params = qsim.GroverParams(n)
    if k == 0:
        return binary_entropy(2.0**-n)
    return binary_entropy(params.sin2_theta)


def paper_bound(n: int) -> float:
    """Upper estimate ``(sqrt(2^n) - 1)(n - 2)/2^(n-3) + 1`` of the quantum sum
    at ``L = sqrt(2^n)``; the derivation needs ``n >= 3``."""
    if n < 3:
        raise ValueError(f"bound is derived for n >= 3, got {n}")
    return (math.sqrt(2.0**n) - 1.0) * (n - 2) / 2.0 ** (n - 3) + 1.0


def analytic_rhs_sum(n: int, L: float) -> float:
    """Closed-form sum; ``L`` may be real, as in the bound comparison."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    return analytic_pair_conditional_entropy(n, 0) + (L - 1) * analytic_pair_conditional_entropy(n, 1)


# --- exact branch enumeration ----------------------------------------------

_TAIL = ["oracle", "measure", "phase", "oracle", "diffusion", "oracle", "measure"]


def _joint_from_outcomes(outcomes: dict, k: int) -> np.ndarray:
    joint = np.zeros((2, 2))
    for key, prob in outcomes.items():
        if k == 0:
            joint[0, key[0]] += prob
        else:
            joint[key[0], key[1]] += prob
    return joint


def exact_pair_distribution(n: int, k: int, variant: str = "standard") -> PairDistribution:
    variant = _canonical(variant, VARIANTS, "variant")
    state = qsim.prepare_initial(n, "subspace")
    outcomes = qsim.outcome_distribution(
        state, qsim.pair_script(k), halt_on_hit=variant == "halt_on_hit"
    )
    return PairDistribution(k, _joint_from_outcomes(outcomes, k), "exact_branch")


def exact_pair_distributions(n: int, L: int, variant: str = "standard") -> list[PairDistribution]:
    """Exact pairs for ``k = 0 .. L-1``, sharing the unmeasured prefix."""
    variant = _canonical(variant, VARIANTS, "variant")
    halt = variant == "halt_on_hit"
    state = qsim.prepare_initial(n, "subspace")
    result = [
        PairDistribution(0, _joint_from_outcomes(
            qsim.outcome_distribution(state, ["oracle", "measure"], halt), 0), "exact_branch")
    ]
    for k in range(1, L):
        outcomes = qsim.outcome_distribution(state, _TAIL, halt)
        result.append(PairDistribution(k, _joint_from_outcomes(outcomes, k), "exact_branch"))
        state = state.iteration()
    return result


# --- Monte-Carlo copies ----------------------------------------------------

def copy_uniforms(seed: int, stream: int, copies: int) -> np.ndarray:
    """Four uniforms in [0, 1) per computer copy, shape ``(copies, 4)``.

    Philox is counter based: copy ``i`` reads counter block ``i`` under key
    ``(stream, seed)``, so each copy's draws depend on nothing but
    ``(seed, stream, i)``.
    """
    bitgen = np.random.Philox(key=(int(stream) << 64) | (int(seed) % _U64))
    raw = bitgen.random_raw(4 * copies).reshape(copies, 4)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _simulate_copies(pair: PairDistribution, u: np.ndarray) -> np.ndarray:
    """Measure ``A_k`` then ``A_k+1`` per copy with Born-rule probabilities."""
    first = (u[:, 0] < pair.p_first_one).astype(np.int64)
    p_next = np.array([pair.conditional_one(0), pair.conditional_one(1)])
    p_next = np.nan_to_num(p_next)
    second = (u[:, 1] < p_next[first]).astype(np.int64)
    return np.column_stack([first, second])


def _bootstrap_state(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def _sampled(exact: PairDistribution, config: ExperimentConfig) -> PairDistribution:
    k = exact.k
    pairs = _simulate_copies(exact, copy_uniforms(config.seed, k, config.samples))
    est = ConditionalEntropyEstimator(random_state=_bootstrap_state(config.seed, k)).fit(pairs)
    return PairDistribution(k, est.joint_, "sampled", est.stderr_, est.n_samples_)


def sample_pairs(config: ExperimentConfig, k: int) -> PairDistribution:
    """Run ``config.samples`` independent copies measuring only ``(A_k, A_k+1)``."""
    return _sampled(exact_pair_distribution(config.n, k, config.variant), config)


RANDOM_STEP_STREAM = 2**63


def sample_random_pairs(config: ExperimentConfig) -> np.ndarray:
    """Copies that each pick their step ``k`` uniformly from ``0 .. L-1``.

    Returns rows ``(k, a_k, a_k+1)``, ready for :class:`TemporalBellEstimator`.
    """
    pairs = exact_pair_distributions(config.n, config.L, config.variant)
    u = copy_uniforms(config.seed, RANDOM_STEP_STREAM, config.samples)
    ks = np.minimum((u[:, 2] * config.L).astype(np.int64), config.L - 1)
    rows = np.empty((config.samples, 3), dtype=np.int64)
    rows[:, 0] = ks
    for k in np.unique(ks).tolist():
        mask = ks == k
        rows[mask, 1:] = _simulate_copies(pairs[k], u[mask])
    return rows


# --- the inequality --------------------------------------------------------

def quantum_pair_distributions(config: ExperimentConfig) -> list[PairDistribution]:
    if config.mode == "analytic":
        raise ValueError("analytic mode has no pair distributions")
    exact = exact_pair_distributions(config.n, config.L, config.variant)
    if config.mode == "exact":
        return exact
    return [_sampled(pair, config) for pair in exact]


def quantum_per_step(n: int, L: int, method: str = "analytic", **config_kwargs) -> list[float]:
    method = _canonical(method, MODES, "method")
    if method == "analytic":
        if config_kwargs.get("variant", "standard") != "standard":
            raise ValueError("closed forms cover the standard variant only")
        return [analytic_pair_conditional_entropy(n, k) for k in range(L)]
    config = ExperimentConfig(n, L, mode=method, **config_kwargs)
    return [p.conditional_entropy for p in quantum_pair_distributions(config)]


def quantum_rhs_sum(n: int, L: int, method: str = "analytic", **config_kwargs) -> float:
    if _canonical(method, MODES, "method") == "analytic" and not config_kwargs:
        return analytic_rhs_sum(n, L)
    return float(sum(quantum_per_step(n, L, method, **config_kwargs)))


def evaluate_inequality(
    information_target: float,
    per_step: Sequence[float],
    *,
    n: int,
    L: int,
    success_probability: float | None,
    paper_bound: float | None = None,
    **extra,
) -> InequalityReport:
    """Form the verdict ``information_target <= sum(per_step)``."""
    if information_target < 0:
        raise ValueError("information target must be >= 0")
    per_step = [float(x) for x in per_step]
    rhs = float(sum(per_step))
    return InequalityReport(
        n=n,
        L=L,
        information_target=float(information_target),
        per_step=per_step,
        rhs_sum=rhs,
        violated=rhs < information_target - VIOLATION_TOL,
        margin=float(information_target) - rhs,
        paper_bound=paper_bound,
        success_probability=None if success_probability is None else float(success_probability),
        **extra,
    )


def _bound_or_none(n):
    return paper_bound(n) if n >= 3 else None


def run_quantum(config: ExperimentConfig, information_target: float | None = None,
                policy: str | None = None) -> InequalityReport:
    if config.mode == "analytic":
        if config.variant != "standard":
            raise ValueError("closed forms cover the standard variant only")
        per_step = quantum_per_step(config.n, config.L)
    else:
        per_step = [p.conditional_entropy for p in quantum_pair_distributions(config)]
    return evaluate_inequality(
        config.n if information_target is None else information_target,
        per_step,
        n=config.n,
        L=config.L,
        success_probability=qsim.grover_success_probability(config.n, config.L),
        paper_bound=_bound_or_none(config.n),
        policy=policy,
        method=config.mode,
        oracle_calls=qsim.oracle_call_count(config.L),
    )


def run_classical(schedule: classical.QuerySchedule,
                  information_target: float | None = None) -> InequalityReport:
    """Report for a fixed classical schedule.

    ``success_probability`` is the chance the schedule's outputs pin down the
    marked item: the fraction of items whose output tuple is unique.
    """
    items = np.arange(2**schedule.n)
    hits = np.isin(items, schedule.inputs)
    # an unqueried item is identifiable only if it is the single one left
    solved = hits.sum() + (1 if hits.sum() == items.size - 1 else 0)
    return evaluate_inequality(
        schedule.n if information_target is None else information_target,
        classical.classical_per_step(schedule),
        n=schedule.n,
        L=schedule.L,
        success_probability=solved / items.size,
        paper_bound=None,
        kind="classical",
        method="enumeration",
        joint_entropy=classical.classical_full_joint_entropy(schedule),
        oracle_calls=schedule.L,
    )


def sweep(n_values, policy: str = "ceil_sqrt", method: str = "analytic",
          classical_baseline: bool = True, **config_kwargs) -> list[InequalityReport]:
    """One report per ``n`` with the step budget set by ``policy``."""
    policy = _canonical(policy, POLICIES, "policy")
    reports = []
    for n in n_values:
        L = iteration_budget(n, policy)
        report = run_quantum(ExperimentConfig(n, L, mode=method, **config_kwargs), policy=policy)
        if classical_baseline and n <= CLASSICAL_BASELINE_MAX_N:
            report.classical_rhs_sum = classical.classical_rhs_sum(classical.sequential_schedule(n))
        reports.append(report)
    return reports


def estimate_from_random_pairs(config: ExperimentConfig) -> TemporalBellEstimator:
    """The randomized-timing experiment end to end: sample copies, then fit."""
    rows = sample_random_pairs(config)
    return TemporalBellEstimator(
        information_target=config.n,
        n_steps=config.L,
        random_state=_bootstrap_state(config.seed, RANDOM_STEP_STREAM),
    ).fit(rows)
