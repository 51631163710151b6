from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.config.constants import MIN_AUTO_HEIGHT, SPARSITY_COLUMNS, TRACE_COLUMNS


@dataclass
class TraceRound:
    t: int
    delta_H: float
    chosen_level: int
    level_sparsities: List[float] = field(default_factory=list)


@dataclass
class StratificationTrace:
    """Per-round entropy reductions of a stratification run"""

    rounds: List[TraceRound] = field(default_factory=list)

    def record(self, delta: float, chosen_level: int, level_sparsities: List[float]) -> TraceRound:
        entry = TraceRound(
            t=len(self.rounds) + 1,
            delta_H=delta,
            chosen_level=chosen_level,
            level_sparsities=list(level_sparsities)
        )
        self.rounds.append(entry)
        return entry

    @property
    def deltas(self) -> List[float]:
        return [r.delta_H for r in self.rounds]

    def second_differences(self) -> Dict[int, float]:
        """Delta_t = delta_t - delta_{t-1} for t >= 2"""
        deltas = self.deltas
        return {t: deltas[t - 1] - deltas[t - 2] for t in range(2, len(deltas) + 1)}

    def to_frame(self) -> pd.DataFrame:
        second = self.second_differences()
        rows = [
            {
                "t": r.t,
                "delta_H": r.delta_H,
                "second_difference": second.get(r.t, np.nan),
                "chosen_level": r.chosen_level,
            }
            for r in self.rounds
        ]
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def sparsity_frame(self) -> pd.DataFrame:
        rows = [
            {"t": r.t, "level": level, "sparsity": sparsity}
            for r in self.rounds
            for level, sparsity in enumerate(r.level_sparsities)
        ]
        return pd.DataFrame(rows, columns=SPARSITY_COLUMNS)


@dataclass
class HeightSelection:
    height: int
    inflection_found: bool
    reason: str  # "inflection", "sparsity_exhausted" or "max_rounds"


def find_inflection(deltas: List[float], allow_height_two: bool = False) -> Optional[int]:
    """
    Least t whose second difference is a local maximum:
    Delta_t >= Delta_{t-1} and Delta_t >= Delta_{t+1}.

    ``deltas[i]`` is the reduction of round i + 1. Delta_1 is undefined,
    so t starts at 3 unless ``allow_height_two`` treats Delta_1 as Delta_2.
    """
    m = len(deltas)
    second = {t: deltas[t - 1] - deltas[t - 2] for t in range(2, m + 1)}
    first_t = 2 if allow_height_two else MIN_AUTO_HEIGHT
    for t in range(first_t, m):
        left = second[t - 1] if t - 1 >= 2 else second[t]
        if second[t] >= left and second[t] >= second[t + 1]:
            return t
    return None


def select_height(deltas: List[float], stopped_on_zero: bool, allow_height_two: bool = False) -> HeightSelection:
    t = find_inflection(deltas, allow_height_two)
    if t is not None:
        return HeightSelection(t, True, "inflection")

    m = len(deltas)
    if stopped_on_zero or m < 2:
        return HeightSelection(m + 1, False, "sparsity_exhausted")

    second = {t: deltas[t - 1] - deltas[t - 2] for t in range(2, m + 1)}
    best = max(second, key=lambda t: (second[t], -t))
    return HeightSelection(best, False, "max_rounds")
