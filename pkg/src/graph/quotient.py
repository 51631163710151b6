"""
Cluster contraction: shrink each cluster to one super-vertex, keep the
links between clusters and drop edges internal to a cluster.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from src.graph.core import Graph
from src.utils.errors import DomainError

Clusters = Union[Mapping[int, Iterable[int]], Sequence[Iterable[int]]]


@dataclass(frozen=True)
class QuotientGraph:
    super_vertices: Tuple[int, ...]
    adjacency: Mapping[int, Mapping[int, float]]
    cluster_volume: Mapping[int, float]
    cluster_cut: Mapping[int, float]

    def weight(self, a: int, b: int) -> float:
        if a not in self.adjacency or b not in self.adjacency:
            raise DomainError(f"Unknown super-vertex in pair ({a}, {b})")
        return self.adjacency[a].get(b, 0.0)

    def links(self, a: int) -> Mapping[int, float]:
        return self.adjacency[a]

    def edges(self) -> Iterator[Tuple[int, int, float]]:
        for a in self.super_vertices:
            for b, w in self.adjacency[a].items():
                if a < b:
                    yield a, b, w


def quotient(g: Graph, clusters: Clusters) -> QuotientGraph:
    """
    Contract disjoint clusters of ``g``.

    ``clusters`` is either a mapping from cluster id to vertices or a sequence,
    in which case ids are the positions 0..m-1. Clusters need not cover V.
    """
    items = list(clusters.items()) if isinstance(clusters, Mapping) else list(enumerate(clusters))

    owner: Dict[int, int] = {}
    members: List[Tuple[int, List[int]]] = []
    for cid, vertices in items:
        block = sorted(set(vertices))
        if not block:
            raise DomainError(f"Cluster {cid} is empty")
        for u in block:
            if not 0 <= u < g.n:
                raise DomainError(f"Vertex {u} out of range for graph with {g.n} vertices")
            if u in owner:
                raise DomainError(f"Vertex {u} appears in clusters {owner[u]} and {cid}")
            owner[u] = cid
        members.append((cid, block))

    adjacency: Dict[int, Dict[int, float]] = {cid: {} for cid, _ in members}
    volume: Dict[int, float] = {}
    cut: Dict[int, float] = {}
    for cid, block in members:
        links = adjacency[cid]
        crossing = 0.0
        for u in block:
            for v, w in g.neighbors(u).items():
                other = owner.get(v)
                if other == cid:
                    continue
                crossing += w
                if other is not None:
                    links[other] = links.get(other, 0.0) + w
        volume[cid] = g.subset_volume(block)
        cut[cid] = crossing

    return QuotientGraph(
        super_vertices=tuple(cid for cid, _ in members),
        adjacency={cid: dict(sorted(links.items())) for cid, links in adjacency.items()},
        cluster_volume=volume,
        cluster_cut=cut
    )
