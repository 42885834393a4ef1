"""Flag enumeration over F_q and point counts of the X_U."""

from .engine import (
    BACKENDS,
    DEFAULT_HOLDOUTS,
    DEFAULT_PRIMES,
    CountRecord,
    PoincarePolynomial,
    admitted_mask,
    clear_cache,
    compute_histogram,
    count_all,
    count_points,
    default_backend,
    flag_total_poly,
    levi_flag_poly,
    poincare,
    poincare_from_counts,
    profile_histogram,
    required_samples,
    split_primes,
    yu_stats,
)
from .flags import (
    FlagPoint,
    FlagProfile,
    adapted_flags,
    encode,
    enumerate_flags,
    flag_profile,
    naive_member,
    pairing,
    projective_points,
)

__all__ = [
    "BACKENDS", "DEFAULT_PRIMES", "DEFAULT_HOLDOUTS", "CountRecord", "PoincarePolynomial",
    "admitted_mask", "clear_cache", "compute_histogram", "count_all", "count_points",
    "default_backend", "flag_total_poly", "levi_flag_poly", "poincare", "poincare_from_counts",
    "profile_histogram", "yu_stats", "split_primes", "required_samples", "FlagPoint", "FlagProfile", "adapted_flags", "encode",
    "enumerate_flags", "flag_profile", "naive_member", "pairing", "projective_points",
]
