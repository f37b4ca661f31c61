"""Invariant suites run by ``tbell validate``.

Each suite returns a :class:`SuiteResult`; a failing suite carries the
first counterexample it met and stops there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import classical, experiment, qsim
from .entropy import (
    IDENTITY_TOL,
    chain_bound_check,
    conditional_entropy,
    joint_entropy,
    shannon_entropy,
)

ENGINE_TOL = 1e-10


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    counterexample: str | None = None

    def summary(self) -> str:
        if self.passed:
            return f"PASS {self.name} ({self.cases} cases)"
        return f"FAIL {self.name}: {self.counterexample}"


def _random_tables(rng, count, shape):
    for _ in range(count):
        # sprinkle exact zeros so the 0 log 0 branch is exercised
        t = rng.dirichlet(np.full(int(np.prod(shape)), 0.7))
        t[rng.random(t.size) < 0.1] = 0.0
        if t.sum() == 0:
            t[0] = 1.0
        yield (t / t.sum()).reshape(shape)


def entropy_identities(cases: int = 1000, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    name = "entropy-identities"
    for i, joint in enumerate(_random_tables(rng, cases, (2, 2))):
        hx = shannon_entropy(joint.sum(axis=1))
        hy = shannon_entropy(joint.sum(axis=0))
        hxy = joint_entropy(joint)
        hyx = conditional_entropy(joint)
        if abs(hxy - (hx + hyx)) > IDENTITY_TOL:
            return SuiteResult(name, False, i, f"chain rule off by {hxy - hx - hyx:.3e} on {joint.tolist()}")
        if hyx > hy + IDENTITY_TOL:
            return SuiteResult(name, False, i, f"H(Y|X)={hyx} > H(Y)={hy} on {joint.tolist()}")
    for i, full in enumerate(_random_tables(rng, cases, (2, 2, 2, 2))):
        bound = chain_bound_check(full)
        if not bound.holds:
            return SuiteResult(name, False, cases + i,
                               f"chain bound lhs={bound.lhs} > rhs={bound.rhs}")
    return SuiteResult(name, True, 2 * cases)


def rotation_law(n_max: int = 10, subspace_n_max: int = 30) -> SuiteResult:
    """Unmeasured iterations advance the input angle by theta each step."""
    name = "rotation-law"
    cases = 0
    for engine, top, tol in (("subspace", subspace_n_max, 1e-12), ("full", n_max, ENGINE_TOL)):
        for n in range(3, top + 1):
            params = qsim.GroverParams(n)
            state = qsim.prepare_initial(n, engine)
            steps = min(experiment.iteration_budget(n), 256)
            for j in range(steps + 1):
                phi = params.half_theta + j * params.theta
                deficit = 1.0 - state.overlap_with_input(phi)
                leak = state.output_one_weight
                norm_err = abs(state.norm_squared - 1.0)
                cases += 1
                if deficit > tol or leak > 1e-12 or norm_err > 1e-12:
                    return SuiteResult(
                        name, False, cases,
                        f"engine={engine} n={n} j={j}: overlap deficit {deficit:.3e}, "
                        f"output leakage {leak:.3e}, norm error {norm_err:.3e}",
                    )
                state = state.iteration()
    return SuiteResult(name, True, cases)


def engine_equivalence(n_max: int = 10) -> SuiteResult:
    name = "engine-equivalence"
    cases = 0
    for n in range(3, n_max + 1):
        for k in range(0, experiment.iteration_budget(n) + 1):
            for halt in (False, True):
                tv = qsim.engine_pair_check(n, qsim.pair_script(k), halt_on_hit=halt)
                cases += 1
                if tv > ENGINE_TOL:
                    return SuiteResult(name, False, cases,
                                       f"n={n} k={k} halt_on_hit={halt}: total variation {tv:.3e}")
    return SuiteResult(name, True, cases)


def exact_vs_analytic(n_max: int = 12) -> SuiteResult:
    name = "exact-vs-analytic"
    cases = 0
    for n in range(3, n_max + 1):
        L = experiment.iteration_budget(n)
        for pair in experiment.exact_pair_distributions(n, L + 1):
            got = pair.conditional_entropy
            want = experiment.analytic_pair_conditional_entropy(n, pair.k)
            cases += 1
            if abs(got - want) > 1e-12:
                return SuiteResult(name, False, cases,
                                   f"n={n} k={pair.k}: exact {got!r} vs closed form {want!r}")
    return SuiteResult(name, True, cases)


def halt_on_hit_dominance(n_max: int = 12) -> SuiteResult:
    name = "halt-on-hit-dominance"
    cases = 0
    for n in range(3, n_max + 1):
        L = experiment.iteration_budget(n)
        standard = experiment.exact_pair_distributions(n, L + 1, "standard")
        halted = experiment.exact_pair_distributions(n, L + 1, "halt_on_hit")
        for s, h in zip(standard[1:], halted[1:]):
            hs, hh = s.conditional_entropy, h.conditional_entropy
            cases += 1
            strict = s.p_first_one > 1e-12
            if hh > hs + 1e-12 or (strict and not hh < hs):
                return SuiteResult(name, False, cases,
                                   f"n={n} k={s.k}: halt_on_hit {hh!r} vs standard {hs!r}")
    return SuiteResult(name, True, cases)


def classical_satisfaction(n_max: int = 12) -> SuiteResult:
    name = "classical-satisfaction"
    for n in range(1, n_max + 1):
        schedule = classical.sequential_schedule(n)
        rhs = classical.classical_rhs_sum(schedule)
        joint = classical.classical_full_joint_entropy(schedule)
        if abs(joint - n) > 1e-9 or rhs < n - 1e-9:
            return SuiteResult(name, False, n,
                               f"n={n}: joint entropy {joint!r}, rhs {rhs!r}")
    return SuiteResult(name, True, n_max)


def quantum_violation(n_max: int = experiment.MAX_N) -> SuiteResult:
    name = "quantum-violation"
    for n in range(3, n_max + 1):
        rhs = experiment.quantum_rhs_sum(n, experiment.iteration_budget(n))
        real_rhs = experiment.analytic_rhs_sum(n, math.sqrt(2.0**n))
        if not rhs < n:
            return SuiteResult(name, False, n - 2, f"n={n}: rhs {rhs!r} >= n")
        if not real_rhs < experiment.paper_bound(n):
            return SuiteResult(name, False, n - 2,
                               f"n={n}: rhs {real_rhs!r} >= bound {experiment.paper_bound(n)!r}")
    return SuiteResult(name, True, n_max - 2)


def run_all(n_max: int = 10):
    """Yield suite results in order, stopping after the first failure."""
    suites = [
        lambda: entropy_identities(),
        lambda: rotation_law(n_max=n_max),
        lambda: engine_equivalence(n_max=n_max),
        lambda: exact_vs_analytic(n_max=max(n_max, 12)),
        lambda: halt_on_hit_dominance(n_max=max(n_max, 12)),
        lambda: classical_satisfaction(n_max=min(max(n_max, 1), 12)),
        lambda: quantum_violation(),
    ]
    for suite in suites:
        result = suite()
        yield result
        if not result.passed:
            return
