"""Subset-sum laboratory: the matrix-based candidate method, exact oracles,
instance generators and a reproducible accuracy harness."""

from .solver import Instance, Solution, SolverConfig, solve, subset_sum, subset_sum_approx, verify_solution

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "Solution",
    "SolverConfig",
    "solve",
    "subset_sum",
    "subset_sum_approx",
    "verify_solution",
]
