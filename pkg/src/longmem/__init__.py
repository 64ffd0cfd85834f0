"""Simulation and distributional verification for long-memory linear
processes driven by innovations in the Gaussian domain of attraction.

The package simulates moving averages X_k = sum_i a_i eps_{k-i} whose
coefficients decay like n^{-alpha} with 1/2 < alpha < 1, builds the
truncation thresholds and normalizing sequences that control their partial
sums, and runs Monte Carlo comparisons of the normalized and
self-normalized partial-sum laws against their limits: fractional Brownian
motion with Hurst index 3/2 - alpha, the matching normal marginals, and
quadratic fBm functionals for unit-root autoregression statistics.
"""

__version__ = "0.1.0"

from .coefficients import (
    Const,
    Farima,
    LogPower,
    PartialSumTable,
    PowerLaw,
    build_partial_sums,
    coefficient_order_check,
    make_scheme,
)
from .empirical import EmpiricalDistribution, ks_one_sample, ks_two_sample
from .errors import (
    ConfigError,
    DegeneratePathError,
    DivergenceError,
    LongmemError,
    ResourceError,
)
from .experiments import (
    ConvergenceReport,
    ExperimentConfig,
    run_clt_experiment,
    run_fdd_covariance_check,
    run_selfnorm_experiment,
    run_truncation_experiment,
    run_unitroot_experiment,
)
from .fbm import (
    FbmFunctionals,
    FbmPath,
    FbmSpec,
    fbm_kernel,
    functionals_fbm,
    reference_distribution,
    sample_fbm,
)
from .innovations import (
    Rademacher,
    StandardGaussian,
    SymmetricPareto2,
    check_da_equivalences,
    make_innovation,
)
from .normalizer import (
    NormalizerTable,
    build_table,
    c_alpha,
    eta,
    eta_many,
    variance_equivalence_ratio,
)
from .process import (
    PathFunctionals,
    SamplePath,
    StepFunction,
    TruncationReport,
    UnitRootRun,
    default_burnin,
    functionals,
    simulate_path,
    truncated_path_diagnostic,
    unit_root_run,
)
from .streams import substream

__all__ = [
    "__version__",
    "Const",
    "Farima",
    "LogPower",
    "PartialSumTable",
    "PowerLaw",
    "build_partial_sums",
    "coefficient_order_check",
    "make_scheme",
    "EmpiricalDistribution",
    "ks_one_sample",
    "ks_two_sample",
    "ConfigError",
    "DegeneratePathError",
    "DivergenceError",
    "LongmemError",
    "ResourceError",
    "ConvergenceReport",
    "ExperimentConfig",
    "run_clt_experiment",
    "run_fdd_covariance_check",
    "run_selfnorm_experiment",
    "run_truncation_experiment",
    "run_unitroot_experiment",
    "FbmFunctionals",
    "FbmPath",
    "FbmSpec",
    "fbm_kernel",
    "functionals_fbm",
    "reference_distribution",
    "sample_fbm",
    "Rademacher",
    "StandardGaussian",
    "SymmetricPareto2",
    "check_da_equivalences",
    "make_innovation",
    "NormalizerTable",
    "build_table",
    "c_alpha",
    "eta",
    "eta_many",
    "variance_equivalence_ratio",
    "PathFunctionals",
    "SamplePath",
    "StepFunction",
    "TruncationReport",
    "UnitRootRun",
    "default_burnin",
    "functionals",
    "simulate_path",
    "truncated_path_diagnostic",
    "unit_root_run",
    "substream",
]
