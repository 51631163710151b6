from .stratify import (
    HcseResult,
    LevelSparsity,
    Stratifier,
    StratifyResult,
    TrialResult,
    hcse_auto,
    k_hcse,
    level_sparsity,
    stratify_once,
    trial_stratify,
)
from .trace import HeightSelection, StratificationTrace, TraceRound, find_inflection, select_height
from .triangle import (
    StagedSubtree,
    Triangle,
    build_triangle,
    compress,
    compress_penalty,
    local_entropy,
    merge_gain,
    stretch,
)

__all__ = [
    "HcseResult",
    "LevelSparsity",
    "Stratifier",
    "StratifyResult",
    "TrialResult",
    "hcse_auto",
    "k_hcse",
    "level_sparsity",
    "stratify_once",
    "trial_stratify",
    "HeightSelection",
    "StratificationTrace",
    "TraceRound",
    "find_inflection",
    "select_height",
    "StagedSubtree",
    "Triangle",
    "build_triangle",
    "compress",
    "compress_penalty",
    "local_entropy",
    "merge_gain",
    "stretch",
]
