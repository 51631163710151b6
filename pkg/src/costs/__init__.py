from .entropy import (
    CostReport,
    concave_exp,
    cost_concave,
    cost_dasgupta,
    cost_report,
    cost_se,
    entropy_identity_residual,
    one_level_entropy,
    structural_entropy,
)

__all__ = [
    "CostReport",
    "concave_exp",
    "cost_concave",
    "cost_dasgupta",
    "cost_report",
    "cost_se",
    "entropy_identity_residual",
    "one_level_entropy",
    "structural_entropy",
]
