"""Information-theoretic temporal Bell inequality for oracle search.

Classical fixed-schedule search satisfies ``I <= sum_k H(A_k+1 | A_k)``;
Grover search with the oracle output measured mid-circuit violates it.
"""

from .classical import (
    OracleSpec,
    QuerySchedule,
    classical_full_joint_entropy,
    classical_pair_joint,
    classical_rhs_sum,
    oracle_eval,
    sequential_schedule,
)
from .entropy import (
    DistributionError,
    binary_entropy,
    chain_bound_check,
    conditional_entropy,
    joint_entropy,
    neg_x_log2_x,
    shannon_entropy,
)
from .estimators import ConditionalEntropyEstimator, TemporalBellEstimator
from .experiment import (
    ExperimentConfig,
    InequalityReport,
    PairDistribution,
    analytic_pair_conditional_entropy,
    evaluate_inequality,
    exact_pair_distribution,
    paper_bound,
    quantum_rhs_sum,
    sample_pairs,
    sweep,
)
from .qsim import (
    EntangledOutputError,
    FullStateVector,
    GroverParams,
    SubspaceState,
    engine_pair_check,
    prepare_initial,
    oracle_call_count,
    run_unmeasured,
)

__version__ = "0.1.0"
