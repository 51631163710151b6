"""
Level-wise stratification of cluster trees.

Every round finds the sparsest level (largest mean relative entropy
reduction over its triangles) and splits it: each triangle on that level
gains exactly one intermediate level, so leaf depth stays uniform.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger

from src.config.constants import DEFAULT_MAX_ROUNDS, IDENTITY_TOLERANCE, MIN_MAX_ROUNDS, REDUCTION_EPSILON
from src.config.settings import LocalEntropyVariant, StretchOrder
from src.costs.entropy import structural_entropy
from src.graph.core import Graph
from src.hcse.trace import StratificationTrace, find_inflection, select_height
from src.hcse.triangle import StagedSubtree, build_triangle, local_entropy
from src.tree.cluster_tree import ClusterTree, trivial_tree
from src.utils.errors import DomainError, TreeIntegrityError


@dataclass
class TrialResult:
    apex: int
    reduction: float
    local_entropy: float
    staging: Optional[StagedSubtree] = None  # None keeps the triangle flat under one wrapper

    @property
    def sparsity(self) -> float:
        if self.local_entropy <= 0:
            return 0.0
        return self.reduction / self.local_entropy


@dataclass
class LevelSparsity:
    level: int
    mean: float
    per_node: Dict[int, float] = field(default_factory=dict)


@dataclass
class StratifyResult:
    tree: ClusterTree
    delta: float
    level: Optional[int]  # None when no level has positive sparsity
    level_sparsities: List[float] = field(default_factory=list)


@dataclass
class HcseResult:
    tree: ClusterTree
    trace: StratificationTrace
    height: int
    inflection_found: bool = True
    reason: str = "fixed_height"


class Stratifier:
    """
    Runs stretch-and-compress trials and applies them level by level.

    Trial outcomes depend only on a triangle, so they are cached per
    (apex, children) and reused until the apex is restructured.
    """

    def __init__(
        self,
        graph: Graph,
        variant: LocalEntropyVariant = LocalEntropyVariant.CHILD_CUT,
        validation_mode: bool = False,
        stretch_order: StretchOrder = StretchOrder.FLATTENED
    ):
        self.graph = graph
        self.variant = variant
        self.stretch_order = stretch_order
        self.validation_mode = validation_mode
        self._trials: Dict[Tuple[int, Tuple[int, ...]], TrialResult] = {}

    def trial(self, t: ClusterTree, u: int) -> TrialResult:
        node = t.node(u)
        if node.is_leaf:
            raise DomainError(f"Node {u} is a leaf; only internal nodes can be stratified")
        key = (u, tuple(node.children))
        cached = self._trials.get(key)
        if cached is not None:
            return cached

        if self.graph.total_volume <= 0:
            result = TrialResult(u, 0.0, 0.0)
        else:
            entropy = local_entropy(t, self.graph, u, self.variant)
            result = TrialResult(u, 0.0, entropy)
            # Two or fewer children admit no split below the apex
            if len(node.children) > 2:
                triangle = build_triangle(t, self.graph, u)
                staged = StagedSubtree.from_triangle(triangle, order=self.stretch_order).stretch().compress()
                reduction = staged.reduction()
                if reduction > REDUCTION_EPSILON:
                    result = TrialResult(u, reduction, entropy, staged)
                else:
                    logger.debug(f"apex {u}: staging reduces {reduction:.3g} bits, kept flat")

        self._trials[key] = result
        return result

    def level_sparsity(self, t: ClusterTree, j: int, levels: Optional[List[List[int]]] = None) -> LevelSparsity:
        levels = levels if levels is not None else t.levels()
        if not 0 <= j < len(levels):
            raise DomainError(f"Level {j} out of range for a tree with {len(levels)} internal levels")
        per_node = {u: self.trial(t, u).sparsity for u in levels[j]}
        mean = sum(per_node.values()) / len(per_node)
        return LevelSparsity(j, mean, per_node)

    def stratify_once(self, t: ClusterTree) -> StratifyResult:
        levels = t.levels()
        sparsities = [self.level_sparsity(t, j, levels).mean for j in range(len(levels))]

        chosen: Optional[int] = None
        best = 0.0
        for j, sparsity in enumerate(sparsities):
            if sparsity > best:
                best, chosen = sparsity, j
        if chosen is None:
            return StratifyResult(t, 0.0, None, sparsities)

        tree = t.copy()
        delta = 0.0
        for u in levels[chosen]:
            trial = self.trial(t, u)
            self._apply(tree, u, trial)
            delta += trial.reduction
            self._trials.pop((u, tuple(t.nodes[u].children)), None)

        if self.validation_mode:
            self._validate(t, tree, delta)

        logger.info(f"Stratified level {chosen} (sparsity {best:.4f}): height {tree.height}, delta {delta:.6f} bits")
        return StratifyResult(tree, delta, chosen, sparsities)

    def _apply(self, tree: ClusterTree, u: int, trial: TrialResult):
        apex = tree.nodes[u]
        if trial.staging is None:
            tree.insert_node(u, list(apex.children), cut=apex.cut)
            return
        for members, cut in trial.staging.groups():
            tree.insert_node(u, members, cut)

    def _validate(self, before: ClusterTree, after: ClusterTree, delta: float):
        after.check_caches(self.graph)
        actual = structural_entropy(self.graph, before) - structural_entropy(self.graph, after)
        if abs(actual - delta) > IDENTITY_TOLERANCE * max(1.0, abs(actual)):
            raise TreeIntegrityError(f"Closed-form delta {delta} differs from recomputed {actual}")


def trial_stratify(t: ClusterTree, g: Graph, u: int) -> TrialResult:
    return Stratifier(g).trial(t, u)


def level_sparsity(t: ClusterTree, g: Graph, j: int) -> LevelSparsity:
    return Stratifier(g).level_sparsity(t, j)


def stratify_once(t: ClusterTree, g: Graph) -> StratifyResult:
    return Stratifier(g).stratify_once(t)


def k_hcse(g: Graph, k: int, stratifier: Optional[Stratifier] = None) -> HcseResult:
    """Stratify the trivial tree until it has ``k`` levels or nothing is gained"""
    if k < 1:
        raise DomainError(f"Height must be positive, got {k}")
    limit = max(1, g.n - 1)
    if k > limit:
        logger.warning(f"Requested height {k} exceeds n-1 = {limit}; clamping")
        k = limit

    stratifier = stratifier or Stratifier(g)
    tree = trivial_tree(g)
    trace = StratificationTrace()
    while tree.height < k:
        result = stratifier.stratify_once(tree)
        if result.level is None:
            logger.info(f"No level has positive sparsity at height {tree.height}; stopping")
            break
        trace.record(result.delta, result.level, result.level_sparsities)
        tree = result.tree
    return HcseResult(tree, trace, tree.height)


def hcse_auto(
    g: Graph,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    allow_height_two: bool = False,
    stratifier: Optional[Stratifier] = None
) -> HcseResult:
    """
    Choose the height at the first inflection of the per-round reductions.

    Rounds run one ahead of the candidate height, since deciding on t
    needs the reduction of round t + 1.
    """
    if max_rounds < MIN_MAX_ROUNDS:
        raise DomainError(f"max_rounds must be at least {MIN_MAX_ROUNDS}, got {max_rounds}")

    stratifier = stratifier or Stratifier(g)
    tree = trivial_tree(g)
    snapshots = [tree]
    trace = StratificationTrace()
    stopped_on_zero = False

    for _ in range(max_rounds):
        result = stratifier.stratify_once(tree)
        if result.level is None:
            stopped_on_zero = True
            break
        trace.record(result.delta, result.level, result.level_sparsities)
        tree = result.tree
        snapshots.append(tree)
        if find_inflection(trace.deltas, allow_height_two) is not None:
            break

    selection = select_height(trace.deltas, stopped_on_zero, allow_height_two)
    if selection.reason == "max_rounds":
        logger.warning(
            f"No inflection within {max_rounds} rounds; using height {selection.height} "
            f"with the largest second difference"
        )
    logger.info(f"Selected height {selection.height} ({selection.reason})")
    return HcseResult(
        snapshots[selection.height - 1],
        trace,
        selection.height,
        selection.inflection_found,
        selection.reason
    )
