import math

import numpy as np
import pytest

from oracles import dense_pair_joint, quantum_terms
from tbell import experiment as ex
from tbell.entropy import binary_entropy, conditional_entropy


@pytest.mark.parametrize("n,k", [(3, 0), (3, 1), (3, 2), (4, 0), (4, 2), (4, 5), (5, 3)])
def test_exact_pair_matches_dense_oracle(n, k):
    np.testing.assert_allclose(ex.exact_pair_distribution(n, k).joint, dense_pair_joint(n, k),
                               atol=1e-12)


def test_exact_pair_examples():
    p0 = ex.exact_pair_distribution(4, 0)
    assert p0.p_first_one == 0
    assert p0.joint[0, 1] == pytest.approx(1 / 16, abs=1e-15)
    p2 = ex.exact_pair_distribution(4, 2)
    assert p2.conditional_one(0) == pytest.approx(0.234375, abs=1e-12)
    assert p2.conditional_one(1) == pytest.approx(0.765625, abs=1e-12)
    halted = ex.exact_pair_distribution(4, 2, "halt_on_hit")
    assert halted.conditional_one(1) == 0
    assert halted.source == "exact_branch"


def test_first_measurement_marginal_varies_with_k():
    theta = 2 * math.asin(0.25)
    for k in range(1, 6):
        p = ex.exact_pair_distribution(4, k)
        assert p.p_first_one == pytest.approx(math.sin((2 * k - 1) * theta / 2) ** 2, abs=1e-12)


def test_incremental_pairs_match_individual():
    many = ex.exact_pair_distributions(5, 7, "halt_on_hit")
    for pair in many:
        single = ex.exact_pair_distribution(5, pair.k, "halt_on_hit")
        np.testing.assert_allclose(pair.joint, single.joint, atol=1e-13)


def test_analytic_terms():
    # mpmath references
    assert ex.analytic_pair_conditional_entropy(4, 0) == pytest.approx(0.3372900666170139, abs=1e-12)
    assert ex.analytic_pair_conditional_entropy(4, 3) == pytest.approx(0.7855602922535472, abs=1e-12)
    assert ex.analytic_pair_conditional_entropy(3, 1) == pytest.approx(0.9886994082884975, abs=1e-12)
    assert ex.analytic_pair_conditional_entropy(4, 0) == pytest.approx(binary_entropy(15 / 16), abs=1e-15)
    for n in (3, 11, 25, 60):
        first, later = quantum_terms(n)
        assert ex.analytic_pair_conditional_entropy(n, 0) == pytest.approx(first, rel=1e-12)
        assert ex.analytic_pair_conditional_entropy(n, 7) == pytest.approx(later, rel=1e-12)


def test_sin2_theta_identity():
    for n in range(3, 20):
        want = 1 / 2 ** (n - 2) - 1 / 2 ** (2 * n - 2)
        assert ex.analytic_pair_conditional_entropy(n, 1) == pytest.approx(binary_entropy(want), abs=1e-15)


def test_quantum_rhs_sum_values():
    assert ex.quantum_rhs_sum(3, 3) == pytest.approx(2.5209632597765914, abs=1e-12)
    assert ex.quantum_rhs_sum(4, 4) == pytest.approx(2.693970943377655, abs=1e-12)
    assert ex.quantum_rhs_sum(10, 32) == pytest.approx(1.1533380517492647, abs=1e-12)
    assert ex.quantum_rhs_sum(4, 4, "exact") == pytest.approx(ex.quantum_rhs_sum(4, 4), abs=1e-12)
    assert ex.quantum_rhs_sum(4, 3) == pytest.approx(1.908410651124108, abs=1e-12)


def test_quantum_rhs_sum_monte_carlo_close():
    est = ex.quantum_rhs_sum(4, 4, "monte_carlo", samples=50_000, seed=3)
    assert est == pytest.approx(2.693970943377655, abs=0.03)


def test_paper_bound():
    assert ex.paper_bound(3) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert ex.paper_bound(4) == 4.0
    assert ex.paper_bound(10) == 2.9375
    with pytest.raises(ValueError):
        ex.paper_bound(2)


def test_iteration_budget():
    assert [ex.iteration_budget(n) for n in (3, 4, 5, 10)] == [3, 4, 6, 32]
    assert ex.iteration_budget(4, "grover_optimal") == 3
    assert ex.iteration_budget(4, "grover-optimal") == 3
    for n in range(1, 61):
        L = ex.iteration_budget(n)
        assert (L - 1) ** 2 < 2**n <= L**2


def test_evaluate_inequality():
    r = ex.evaluate_inequality(3, [2.520962], n=3, L=3, success_probability=0.5)
    assert r.violated and r.margin == pytest.approx(0.479038)
    r = ex.evaluate_inequality(3, [4.167527], n=3, L=8, success_probability=1.0)
    assert not r.violated
    assert not ex.evaluate_inequality(0, [0.0], n=3, L=1, success_probability=1).violated
    with pytest.raises(ValueError):
        ex.evaluate_inequality(-1, [0.0], n=3, L=1, success_probability=1)


def test_report_invariants():
    r = ex.run_quantum(ex.ExperimentConfig(6, mode="exact"))
    assert r.rhs_sum == pytest.approx(sum(r.per_step), abs=1e-9)
    assert r.violated == (r.rhs_sum < r.information_target)
    assert r.success_probability == pytest.approx(ex.qsim.grover_success_probability(6, 8))
    assert r.paper_bound == ex.paper_bound(6)


def test_config_validation():
    with pytest.raises(ValueError):
        ex.ExperimentConfig(2)
    with pytest.raises(ValueError):
        ex.ExperimentConfig(61)
    with pytest.raises(ValueError):
        ex.ExperimentConfig(4, L=0)
    with pytest.raises(ValueError):
        ex.ExperimentConfig(4, samples=0, mode="monte_carlo")
    with pytest.raises(ValueError):
        ex.ExperimentConfig(4, mode="quantum")
    with pytest.raises(ValueError):
        ex.ExperimentConfig(40, mode="exact")
    assert ex.ExperimentConfig(4, variant="halt-on-hit").variant == "halt_on_hit"


def test_default_seed_from_env(monkeypatch):
    monkeypatch.setenv("TBL_SEED", "42")
    assert ex.ExperimentConfig(4).seed == 42
    monkeypatch.delenv("TBL_SEED")
    assert ex.ExperimentConfig(4).seed == ex.DEFAULT_SEED


def test_sample_pairs_reproducible_and_consistent():
    cfg = ex.ExperimentConfig(4, 4, mode="monte_carlo", samples=200_000, seed=11)
    a = ex.sample_pairs(cfg, 2)
    b = ex.sample_pairs(cfg, 2)
    assert a.joint.tobytes() == b.joint.tobytes() and a.stderr == b.stderr
    assert a.source == "sampled" and a.samples == 200_000
    exact = ex.exact_pair_distribution(4, 2).joint
    tv = 0.5 * np.abs(a.joint - exact).sum()
    assert tv < 5 / math.sqrt(200_000)
    assert abs(a.conditional_entropy - 0.7855602922535472) < 5 * a.stderr


def test_sample_pairs_single_copy():
    cfg = ex.ExperimentConfig(4, 4, mode="monte_carlo", samples=1, seed=0)
    p = ex.sample_pairs(cfg, 2)
    assert p.joint.sum() == 1 and np.count_nonzero(p.joint) == 1
    assert p.conditional_entropy == 0
    assert p.stderr is None


def test_copy_streams_depend_only_on_copy_index():
    small = ex.copy_uniforms(5, 0, 10)
    big = ex.copy_uniforms(5, 0, 1000)
    np.testing.assert_array_equal(small, big[:10])
    assert not np.array_equal(ex.copy_uniforms(5, 1, 10), small)
    assert small.min() >= 0 and small.max() < 1


def test_random_pair_experiment():
    cfg = ex.ExperimentConfig(5, 6, mode="monte_carlo", samples=300_000, seed=2)
    rows = ex.sample_random_pairs(cfg)
    assert rows.shape == (300_000, 3)
    assert set(np.unique(rows[:, 0])) == set(range(6))
    assert np.all(rows[rows[:, 0] == 0, 1] == 0)
    est = ex.estimate_from_random_pairs(cfg)
    assert est.rhs_sum_ == pytest.approx(ex.quantum_rhs_sum(5, 6), abs=0.05)
    assert est.violated_


@pytest.mark.parametrize("n", [3, 4, 7])
def test_halt_on_hit_never_exceeds_standard(n):
    std = ex.exact_pair_distributions(n, 10)
    halt = ex.exact_pair_distributions(n, 10, "halt_on_hit")
    for s, h in zip(std[1:], halt[1:]):
        assert h.conditional_entropy < s.conditional_entropy
    assert halt[0].conditional_entropy == std[0].conditional_entropy


def test_sweep():
    reports = ex.sweep(range(3, 13))
    assert all(r.violated for r in reports)
    assert [r.L for r in reports][:3] == [3, 4, 6]
    assert reports[0].classical_rhs_sum == pytest.approx(4.167560212016352, abs=1e-9)
    opt = ex.sweep([4], "grover_optimal")[0]
    assert opt.L == 3 and opt.rhs_sum == pytest.approx(1.908410651124108, abs=1e-12)
    assert ex.sweep([20], classical_baseline=True)[0].classical_rhs_sum is None


def test_run_classical_report():
    r = ex.run_classical(ex.classical.sequential_schedule(3))
    assert r.kind == "classical" and not r.violated
    assert r.rhs_sum == pytest.approx(4.167560212016352, abs=1e-9)
    assert r.joint_entropy == pytest.approx(3.0)
    assert r.success_probability == 1.0
    partial = ex.run_classical(ex.classical.QuerySchedule(2, (0, 1, 2)))
    assert partial.success_probability == 1.0
    assert ex.run_classical(ex.classical.QuerySchedule(2, (0,))).success_probability == 0.25


def test_oracle_calls_reported_separately():
    assert ex.run_quantum(ex.ExperimentConfig(4)).oracle_calls == 8
    assert ex.run_classical(ex.classical.sequential_schedule(3)).oracle_calls == 8
