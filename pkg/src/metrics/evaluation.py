"""
Agreement between a cluster tree and a planted hierarchy.
"""

from dataclasses import dataclass, field
from typing import AbstractSet, Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd
from loguru import logger
from sklearn.metrics import normalized_mutual_info_score

from src.config.constants import NMI_COLUMNS
from src.config.settings import NmiAverage
from src.costs.entropy import CostReport, cost_report
from src.graph.core import Graph
from src.metrics.partition import FlatPartition, partition_at_level
from src.tree.cluster_tree import ClusterTree
from src.utils.errors import DomainError


def nmi(a: FlatPartition, b: FlatPartition, average: NmiAverage = NmiAverage.ARITHMETIC) -> float:
    """
    Normalized mutual information of two partitions of the same vertices.

    A single-block partition has zero entropy; the ratio is then taken as
    1 when both partitions are equal and 0 otherwise.
    """
    if a.n_vertices != b.n_vertices:
        raise DomainError(f"Partitions cover {a.n_vertices} and {b.n_vertices} vertices")
    if len(a) == 1 or len(b) == 1:
        return 1.0 if a == b else 0.0
    score = normalized_mutual_info_score(a.labels(), b.labels(), average_method=NmiAverage(average).value)
    return float(min(1.0, max(0.0, score)))


def jaccard(a: AbstractSet[int], b: AbstractSet[int]) -> float:
    union = len(a | b)
    if union == 0:
        raise DomainError("Jaccard index of two empty sets is undefined")
    return len(a & b) / union


def avg_jaccard(t: ClusterTree, truth: Sequence[Iterable[int]]) -> float:
    """Mean over truth clusters of the best Jaccard index any internal node reaches"""
    if not truth:
        raise DomainError("Need at least one ground-truth cluster")

    sizes = t.leaf_counts()
    scores = []
    for cluster in truth:
        c = set(cluster)
        if not c:
            raise DomainError("Ground-truth clusters must be non-empty")
        if not all(0 <= v < t.n_vertices for v in c):
            raise DomainError(f"Ground-truth cluster has vertices outside 0..{t.n_vertices - 1}")

        # |leafset(a) & c| for every internal ancestor a of some v in c
        overlap: Dict[int, int] = {}
        for v in c:
            a = v
            while a != t.root:
                a = t.nodes[a].parent
                overlap[a] = overlap.get(a, 0) + 1
        scores.append(max(k / (sizes[a] + len(c) - k) for a, k in overlap.items()))
    return sum(scores) / len(scores)


@dataclass
class LevelNmi:
    level: int
    nmi: float
    tree_blocks: int
    truth_blocks: int


@dataclass
class MetricReport:
    costs: CostReport
    avg_jaccard: Optional[float] = None
    level_nmi: List[LevelNmi] = field(default_factory=list)

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = dict(self.costs.to_record())
        if self.avg_jaccard is not None:
            record["avg_jaccard"] = self.avg_jaccard
        for row in self.level_nmi:
            record[f"nmi_level_{row.level}"] = row.nmi
        return record

    def nmi_frame(self) -> pd.DataFrame:
        rows = [
            {"level": r.level, "nmi": r.nmi, "tree_blocks": r.tree_blocks, "truth_blocks": r.truth_blocks}
            for r in self.level_nmi
        ]
        return pd.DataFrame(rows, columns=NMI_COLUMNS)


def truth_clusters(truth: ClusterTree) -> List[List[int]]:
    """Vertex sets of the non-root internal nodes; the root alone for a trivial tree"""
    clusters = [truth.leaves_under(a) for a in truth.internal_nodes() if a != truth.root]
    return clusters or [truth.leaves_under(truth.root)]


def evaluate(
    tree: ClusterTree,
    graph: Graph,
    truth: Optional[ClusterTree] = None,
    average: NmiAverage = NmiAverage.ARITHMETIC
) -> MetricReport:
    report = MetricReport(costs=cost_report(graph, tree))
    if truth is None:
        return report
    if truth.n_vertices != tree.n_vertices:
        raise DomainError(f"Tree has {tree.n_vertices} leaves, ground truth has {truth.n_vertices}")

    report.avg_jaccard = avg_jaccard(tree, truth_clusters(truth))

    try:
        depth = min(len(tree.levels()), len(truth.levels()))
    except DomainError as e:
        logger.warning(f"Skipping per-level NMI: {e}")
        return report
    for j in range(depth):
        ours, planted = partition_at_level(tree, j), partition_at_level(truth, j)
        report.level_nmi.append(LevelNmi(j, nmi(ours, planted, average), len(ours), len(planted)))
    return report
