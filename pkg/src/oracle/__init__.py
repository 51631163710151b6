from .enumeration import (
    COST_FUNCTIONS,
    BruteForceResult,
    brute_min,
    enumerate_topologies,
    enumerate_trees,
    gamma_cost,
    is_balanced_binary,
    resolve_cost,
    root_split_sizes,
)

__all__ = [
    "COST_FUNCTIONS",
    "BruteForceResult",
    "brute_min",
    "enumerate_topologies",
    "enumerate_trees",
    "gamma_cost",
    "is_balanced_binary",
    "resolve_cost",
    "root_split_sizes",
]
