"""Superabundant and colossally abundant numbers as factored integers,
Robin-type inequalities with certified precision, and the record
subsequences X, X', X'' built from the superabundant stream."""

__version__ = "0.1.0"

from .intervals import (
    DomainError,
    Interval,
    Ordering,
    PrecisionPolicy,
    UndecidedComparisonError,
    compare_certified,
    constants_gamma,
    exp_gamma_interval,
    gamma_interval,
)
from .factored import (
    FactoredInteger,
    ParseError,
    format_factorization,
    is_sa_shape,
    log_value,
    loglog_value,
    parse_factorization,
    quality,
    sigma_over_n,
)
from .primes import PrimeTable, extend, primes_first
from .sa import (
    FrontierEnumerator,
    SaCandidate,
    SaEnumerator,
    SaRecord,
    brute_force_sa_upto,
    enumerate_sa,
    verify_sa_prefix,
)
from .ca import CaEpsilon, ca_number
from .robin import (
    GronwallResult,
    RobinConstants,
    RobinStatus,
    RobinVerdict,
    counterexample_report,
    gronwall_bound_check,
    robin_check,
    robin_violators_upto,
)
from .sequences import (
    ChainFilter,
    ChainVariant,
    SequenceFolds,
    SequenceStats,
    XaFilter,
    build_chain,
    compute_stats,
    filter_xa,
)
from .tables import DivergenceReport, ExternalSaTable, diff_tables, ingest_table

__all__ = [
    "__version__",
    "DomainError", "Interval", "Ordering", "PrecisionPolicy",
    "UndecidedComparisonError", "compare_certified", "constants_gamma",
    "exp_gamma_interval", "gamma_interval",
    "FactoredInteger", "ParseError", "format_factorization", "is_sa_shape",
    "log_value", "loglog_value", "parse_factorization", "quality",
    "sigma_over_n",
    "PrimeTable", "extend", "primes_first",
    "FrontierEnumerator", "SaCandidate", "SaEnumerator", "SaRecord", "brute_force_sa_upto",
    "enumerate_sa", "verify_sa_prefix",
    "CaEpsilon", "ca_number",
    "GronwallResult", "RobinConstants", "RobinStatus", "RobinVerdict",
    "counterexample_report", "gronwall_bound_check", "robin_check",
    "robin_violators_upto",
    "ChainFilter", "ChainVariant", "SequenceFolds", "SequenceStats",
    "XaFilter", "build_chain", "compute_stats", "filter_xa",
    "DivergenceReport", "ExternalSaTable", "diff_tables", "ingest_table",
]
