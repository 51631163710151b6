from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.tree.cluster_tree import ClusterTree
from src.utils.errors import DomainError


@dataclass(frozen=True)
class FlatPartition:
    """
    Disjoint non-empty vertex blocks covering 0..n-1.

    Blocks are stored sorted by their smallest vertex, so two partitions
    with the same blocks compare equal regardless of input order.
    """

    blocks: Tuple[FrozenSet[int], ...]
    n_vertices: int

    def __post_init__(self):
        seen = 0
        covered = set()
        for block in self.blocks:
            if not block:
                raise DomainError("Partition blocks must be non-empty")
            if not covered.isdisjoint(block):
                raise DomainError(f"Partition blocks overlap on {sorted(covered & block)[:5]}")
            covered |= block
            seen += len(block)
        if covered != set(range(self.n_vertices)):
            raise DomainError(f"Partition covers {seen} vertices, expected exactly 0..{self.n_vertices - 1}")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n_vertices: Optional[int] = None) -> "FlatPartition":
        frozen = [frozenset(b) for b in blocks]
        if n_vertices is None:
            n_vertices = sum(len(b) for b in frozen)
        frozen.sort(key=lambda b: min(b) if b else -1)
        return cls(tuple(frozen), n_vertices)

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> "FlatPartition":
        groups: Dict[Hashable, List[int]] = {}
        for v, label in enumerate(labels):
            groups.setdefault(label, []).append(v)
        return cls.from_blocks(groups.values(), len(labels))

    def labels(self) -> np.ndarray:
        return labels_from_partition(self)

    def __len__(self) -> int:
        return len(self.blocks)


def labels_from_partition(p: FlatPartition) -> np.ndarray:
    """Block index of every vertex"""
    labels = np.empty(p.n_vertices, dtype=np.int64)
    for i, block in enumerate(p.blocks):
        labels[list(block)] = i
    return labels


def partition_at_level(t: ClusterTree, j: int) -> FlatPartition:
    """Clusters one level below internal level ``j``, i.e. the nodes at depth j + 1"""
    height = len(t.levels())
    if not 0 <= j < height:
        raise DomainError(f"Level {j} out of range for a tree of height {height}")

    depth = j + 1
    groups: Dict[int, List[int]] = {}
    for v in range(t.n_vertices):
        a = v
        while t.nodes[a].depth > depth:
            a = t.nodes[a].parent
        groups.setdefault(a, []).append(v)
    return FlatPartition.from_blocks(groups.values(), t.n_vertices)
