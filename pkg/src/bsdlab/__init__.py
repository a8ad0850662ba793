"""bsdlab: partial products of elliptic-curve point counts, Frobenius angle
statistics, and Monte Carlo moment experiments.

The compute-heavy inner loops run in a compiled extension when available;
set BSDLAB_PURE=1 to force the pure-Python twin and BSDLAB_THREADS to cap
the worker count (0 or unset = one per CPU).  Results are identical either
way, bit for bit.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND, HAVE_FAST
from .analytic import (
    BigRational,
    check_st_integrals,
    expected_xi_moments,
    moment_identity,
    quadrature,
)
from .bsdprod import (
    PartialProductSeries,
    RankFit,
    accumulate_logP,
    compare_curves,
    rank_fit,
)
from .catalog import CatalogEntry, curve_for, lookup
from .curves import (
    ApRecord,
    CMClass,
    CurveQ,
    ReductionType,
    ap_bruteforce,
    ap_legendre,
    cm_detect,
    derive_invariants,
    is_supersingular,
    theta_of,
    trace_scan,
)
from .montecarlo import MCConfig, MCResult, moment_report, sample_st_theta, sample_uniform_theta, simulate_logP
from .primes import PrimeTable, loglog, mertens_sum, sieve_primes
from .satotate import (
    BirchResult,
    Histogram,
    KSReport,
    ThetaSample,
    birch_ensemble,
    ks_statistic,
    st_cdf,
    supersingular_density,
    theta_distribution_report,
    uniform_cdf,
)

__all__ = [
    "BACKEND",
    "HAVE_FAST",
    "BigRational",
    "check_st_integrals",
    "expected_xi_moments",
    "moment_identity",
    "quadrature",
    "PartialProductSeries",
    "RankFit",
    "accumulate_logP",
    "compare_curves",
    "rank_fit",
    "CatalogEntry",
    "curve_for",
    "lookup",
    "ApRecord",
    "CMClass",
    "CurveQ",
    "ReductionType",
    "ap_bruteforce",
    "ap_legendre",
    "cm_detect",
    "derive_invariants",
    "is_supersingular",
    "theta_of",
    "trace_scan",
    "MCConfig",
    "MCResult",
    "moment_report",
    "sample_st_theta",
    "sample_uniform_theta",
    "simulate_logP",
    "PrimeTable",
    "loglog",
    "mertens_sum",
    "sieve_primes",
    "BirchResult",
    "Histogram",
    "KSReport",
    "ThetaSample",
    "birch_ensemble",
    "ks_statistic",
    "st_cdf",
    "supersingular_density",
    "theta_distribution_report",
    "uniform_cdf",
]
