"""Distributed estimation of a correlation parameter from modulo-M sums.

Two terminals observe correlated M-ary sequences and compress them with the
same random linear code.  Adding the two syndromes yields the syndrome of
the modular sum Z = (X + Y) mod M, which a minimum-entropy decoder recovers
at rates below the Slepian-Wolf sum rate; a frequency count on the decoded
sequence then estimates the correlation parameter at the centralized
Cramer-Rao limit.  Subpackages: exact Z_M linear algebra (modmat), the
source family (sources), coding and decoding (codec), estimators and
baselines (estimation), and the Monte Carlo harness (harness, cli).
"""

from .codec import (
    CosetTooLargeError,
    DecodeOutcome,
    LinearCode,
    combine,
    encode,
    generate_code,
    min_entropy_decode,
    oracle_decode,
)
from .estimation import (
    EstimationResult,
    PerformanceSummary,
    crlb,
    estimate_centralized,
    estimate_distributed,
    estimate_distributed_binary,
    han_amari_variance_index,
    performance_summary,
    variance_index_scheme,
)
from .harness import (
    ExperimentConfig,
    ExperimentPoint,
    PointSummary,
    RateRegionReport,
    SweepResult,
    TrialRecord,
    report_rate_region,
    run_point,
    run_sweep,
    run_trial,
)
from .modmat import (
    KernelBasis,
    ModMatrix,
    ModVector,
    NoSolutionError,
    kernel_basis,
    mat_vec_mul,
    solve_particular,
)
from .sources import (
    JointSourceModel,
    SequencePair,
    TypeStats,
    conditional_entropies,
    empirical_entropy,
    entropy_Z,
    joint_pmf,
    modsum,
    sample_pair,
    shannon_entropy_bits,
    sw_sum_rate,
    type_of,
)

__version__ = "0.1.0"

__all__ = [
    "CosetTooLargeError",
    "DecodeOutcome",
    "EstimationResult",
    "ExperimentConfig",
    "ExperimentPoint",
    "JointSourceModel",
    "KernelBasis",
    "LinearCode",
    "ModMatrix",
    "ModVector",
    "NoSolutionError",
    "PerformanceSummary",
    "PointSummary",
    "RateRegionReport",
    "SequencePair",
    "SweepResult",
    "TrialRecord",
    "TypeStats",
    "combine",
    "conditional_entropies",
    "crlb",
    "empirical_entropy",
    "encode",
    "entropy_Z",
    "estimate_centralized",
    "estimate_distributed",
    "estimate_distributed_binary",
    "generate_code",
    "han_amari_variance_index",
    "joint_pmf",
    "kernel_basis",
    "mat_vec_mul",
    "min_entropy_decode",
    "modsum",
    "oracle_decode",
    "performance_summary",
    "report_rate_region",
    "run_point",
    "run_sweep",
    "run_trial",
    "sample_pair",
    "shannon_entropy_bits",
    "solve_particular",
    "sw_sum_rate",
    "type_of",
    "variance_index_scheme",
    "__version__",
]
