from .core import (
    SENTINEL,
    Instance,
    Solution,
    SolverConfig,
    SolveResult,
    SolveStats,
    verify_solution,
)
from .procedures import (
    FLAG_ORDER,
    SoundnessError,
    arrange,
    balance_op,
    constrain_op,
    enumerate_pairs,
    enumerate_windows,
    fabricate_sentinel,
    partial_subset_sum,
    solve,
    subset_sum,
    subset_sum_approx,
    test_op,
    trivial_scans,
)

__all__ = [
    "FLAG_ORDER",
    "SENTINEL",
    "Instance",
    "Solution",
    "SolveResult",
    "SolveStats",
    "SolverConfig",
    "SoundnessError",
    "arrange",
    "balance_op",
    "constrain_op",
    "enumerate_pairs",
    "enumerate_windows",
    "fabricate_sentinel",
    "partial_subset_sum",
    "solve",
    "subset_sum",
    "subset_sum_approx",
    "test_op",
    "trivial_scans",
    "verify_solution",
]
