"""
Hierarchical stochastic block model.

The planted hierarchy has ``len(level_cluster_counts)`` cluster levels
below the root. Two vertices whose lowest common planted cluster sits at
depth d are joined by a unit-weight edge with probability p[d]; the root
is depth 0 and a bottom cluster depth L, so ``p`` has L + 1 entries.

Random streams: ``SeedSequence(seed).spawn(2)`` yields one child for the
cluster sizes and one for the edges, each driving a PCG64 generator. Edge
draws take one uniform double per vertex pair in row-major upper-triangle
order (u ascending, then v > u ascending); the pair is an edge iff the
draw is below its probability.
"""

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config.constants import HSBM_MIN_CLUSTER_SIZE
from src.graph.core import Graph
from src.metrics.partition import FlatPartition, partition_at_level
from src.tree.cluster_tree import ClusterTree
from src.utils.errors import DocumentError, DomainError


class SizeDistribution(str, Enum):
    UNIFORM = "uniform"  # uniform random composition with a minimum size
    EVEN = "even"  # sizes differ by at most one


class HsbmSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    level_cluster_counts: List[int] = Field(min_length=1)
    p: List[float]
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    size_distribution: SizeDistribution = SizeDistribution.UNIFORM
    min_cluster_size: int = Field(default=HSBM_MIN_CLUSTER_SIZE, ge=1)

    @model_validator(mode="after")
    def check_shape(self):
        counts, p = self.level_cluster_counts, self.p
        if counts[0] < 1:
            raise ValueError("cluster counts must be positive")
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise ValueError(f"level_cluster_counts must be strictly increasing, got {counts}")
        if len(p) != len(counts) + 1:
            raise ValueError(f"p needs {len(counts) + 1} entries (one per LCA depth), got {len(p)}")
        if any(not 0.0 <= x <= 1.0 for x in p):
            raise ValueError(f"probabilities must lie in [0, 1], got {p}")
        if any(b <= a for a, b in zip(p, p[1:])):
            raise ValueError(f"p must be strictly increasing with depth, got {p}")
        return self

    @property
    def depth(self) -> int:
        return len(self.level_cluster_counts)


def load_spec(path: Union[str, Path]) -> HsbmSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return HsbmSpec.model_validate_json(text)
    except ValidationError as e:
        raise DocumentError(f"Invalid HSBM spec {path}: {e}") from None


def dumps_spec(spec: HsbmSpec) -> str:
    return json.dumps(spec.model_dump(mode="json"), indent=2) + "\n"


@dataclass
class GroundTruth:
    tree: ClusterTree
    level_partitions: List[FlatPartition]


def split_children(parents: int, children: int) -> List[int]:
    """Children per parent, as even as possible; earlier parents take the remainder"""
    base, extra = divmod(children, parents)
    return [base + (1 if i < extra else 0) for i in range(parents)]


def draw_sizes(spec: HsbmSpec, rng: np.random.Generator) -> List[int]:
    m = spec.level_cluster_counts[-1]
    floor = spec.min_cluster_size
    if spec.n < m * floor:
        raise DomainError(
            f"{m} bottom clusters of at least {floor} vertices need n >= {m * floor}, got {spec.n}"
        )
    if spec.size_distribution == SizeDistribution.EVEN:
        return split_children(m, spec.n)

    # Uniform composition of n - m * (floor - 1) into m positive parts
    free = spec.n - m * (floor - 1)
    cuts = np.sort(rng.choice(free - 1, size=m - 1, replace=False) + 1) if m > 1 else np.array([], dtype=np.int64)
    bounds = np.concatenate(([0], cuts, [free]))
    return [int(s) + floor - 1 for s in np.diff(bounds)]


def _ancestry(spec: HsbmSpec, sizes: List[int]) -> np.ndarray:
    """Planted cluster index of every vertex at every level, shape (n, L)"""
    counts = spec.level_cluster_counts
    # parent_of[j][c]: index at level j of the parent of cluster c at level j + 1
    parent_of = []
    for j in range(len(counts) - 1):
        split = split_children(counts[j], counts[j + 1])
        parent_of.append(np.repeat(np.arange(counts[j]), split))

    bottom = np.repeat(np.arange(counts[-1]), sizes)
    ancestry = np.empty((spec.n, len(counts)), dtype=np.int64)
    ancestry[:, -1] = bottom
    for j in range(len(counts) - 2, -1, -1):
        ancestry[:, j] = parent_of[j][ancestry[:, j + 1]]
    return ancestry


def _nested(ancestry: np.ndarray, level: int, members: np.ndarray) -> list:
    if level == ancestry.shape[1]:
        return [int(v) for v in members]
    clusters = ancestry[members, level]
    return [_nested(ancestry, level + 1, members[clusters == c]) for c in np.unique(clusters)]


def _draw_edges(ancestry: np.ndarray, p: np.ndarray, rng: np.random.Generator) -> List[Tuple[int, int, float]]:
    n = ancestry.shape[0]
    edges: List[Tuple[int, int, float]] = []
    for u in range(n - 1):
        # Shared planted levels = depth of the lowest common cluster
        depth = (ancestry[u + 1:] == ancestry[u]).sum(axis=1)
        hits = np.flatnonzero(rng.random(n - u - 1) < p[depth])
        edges.extend((u, u + 1 + int(k), 1.0) for k in hits)
    return edges


def generate(spec: HsbmSpec) -> Tuple[Graph, GroundTruth]:
    """Sample a graph and its planted hierarchy; a pure function of ``spec``"""
    if spec.n < spec.level_cluster_counts[-1]:
        raise DomainError(f"n = {spec.n} is smaller than the deepest cluster count {spec.level_cluster_counts[-1]}")

    size_seed, edge_seed = np.random.SeedSequence(spec.seed).spawn(2)
    sizes = draw_sizes(spec, np.random.Generator(np.random.PCG64(size_seed)))
    ancestry = _ancestry(spec, sizes)
    edges = _draw_edges(ancestry, np.asarray(spec.p, dtype=np.float64), np.random.Generator(np.random.PCG64(edge_seed)))

    graph = Graph.from_edges(spec.n, edges)
    tree = ClusterTree.from_nested(graph, _nested(ancestry, 0, np.arange(spec.n)))
    truth = GroundTruth(tree, [partition_at_level(tree, j) for j in range(spec.depth)])
    logger.info(
        f"Generated HSBM: n={spec.n}, levels={spec.level_cluster_counts}, "
        f"edges={len(edges)}, bottom sizes {min(sizes)}..{max(sizes)}"
    )
    return graph, truth


def planted_partition(gt: GroundTruth, level: int) -> FlatPartition:
    if not 0 <= level < len(gt.level_partitions):
        raise DomainError(f"Level {level} out of range for {len(gt.level_partitions)} planted levels")
    return gt.level_partitions[level]
