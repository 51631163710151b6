from .evaluation import LevelNmi, MetricReport, avg_jaccard, evaluate, jaccard, nmi, truth_clusters
from .partition import FlatPartition, labels_from_partition, partition_at_level

__all__ = [
    "LevelNmi",
    "MetricReport",
    "avg_jaccard",
    "evaluate",
    "jaccard",
    "nmi",
    "truth_clusters",
    "FlatPartition",
    "labels_from_partition",
    "partition_at_level",
]
