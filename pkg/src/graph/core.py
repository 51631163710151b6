"""
Weighted undirected graph and edge-list ingestion
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from loguru import logger

from src.config.constants import COMMENT_PREFIXES
from src.utils.errors import DomainError, GraphParseError

EdgeTriple = Tuple[int, int, float]


@dataclass(frozen=True)
class VertexLabels:
    """Sidecar mapping between external vertex labels and dense indices"""

    labels: Tuple[str, ...]
    _index: Dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for i, label in enumerate(self.labels):
            if label in index:
                raise DomainError(f"Duplicate vertex label: {label!r}")
            index[label] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def default(cls, n: int) -> "VertexLabels":
        return cls(tuple(str(i) for i in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"Unknown vertex label: {label!r}") from None

    def label_of(self, vertex: int) -> str:
        return self.labels[vertex]


class Graph:
    """
    Immutable weighted undirected graph with cached degrees.

    Vertices are dense indices 0..n-1; external labels live in ``labels``.
    Edge weights are positive, there are no self-loops and parallel edges
    are merged on construction.
    """

    __slots__ = ("n", "labels", "_adjacency", "degree", "total_volume", "_edge_cache")

    def __init__(self, n: int, adjacency: Sequence[Mapping[int, float]], labels: Optional[VertexLabels] = None):
        if n < 0:
            raise DomainError(f"Vertex count must be non-negative, got {n}")
        if len(adjacency) != n:
            raise DomainError(f"Adjacency has {len(adjacency)} rows for {n} vertices")
        labels = labels or VertexLabels.default(n)
        if len(labels) != n:
            raise DomainError(f"{len(labels)} labels for {n} vertices")

        self.n = n
        self.labels = labels
        self._adjacency: Tuple[Dict[int, float], ...] = tuple(
            {v: adjacency[u][v] for v in sorted(adjacency[u])} for u in range(n)
        )
        degree = np.array(
            [math.fsum(row.values()) for row in self._adjacency], dtype=np.float64
        ).reshape(n)
        degree.setflags(write=False)
        self.degree = degree
        self.total_volume = math.fsum(degree.tolist())
        self._edge_cache: Optional[List[EdgeTriple]] = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[EdgeTriple], labels: Optional[VertexLabels] = None) -> "Graph":
        adjacency: List[Dict[int, float]] = [{} for _ in range(n)]
        for u, v, w in edges:
            _check_edge(n, u, v, w)
            adjacency[u][v] = adjacency[u].get(v, 0.0) + w
            adjacency[v][u] = adjacency[v].get(u, 0.0) + w
        return cls(n, adjacency, labels)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, weight: str = "weight") -> "Graph":
        if graph.is_directed():
            raise DomainError("Directed graphs are not supported")
        labels = VertexLabels(tuple(str(node) for node in graph.nodes()))
        position = {node: i for i, node in enumerate(graph.nodes())}
        edges = (
            (position[u], position[v], float(data.get(weight, 1.0)))
            for u, v, data in graph.edges(data=True)
        )
        return cls.from_edges(len(labels), edges, labels)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_weighted_edges_from(self.edges())
        return graph

    def neighbors(self, u: int) -> Mapping[int, float]:
        self._check_vertex(u)
        return self._adjacency[u]

    def weight(self, u: int, v: int) -> float:
        self._check_vertex(u)
        self._check_vertex(v)
        return self._adjacency[u].get(v, 0.0)

    def edges(self) -> Iterator[EdgeTriple]:
        """Each undirected edge once as (u, v, w) with u < v, in sorted order"""
        if self._edge_cache is None:
            self._edge_cache = [
                (u, v, w)
                for u in range(self.n)
                for v, w in self._adjacency[u].items()
                if u < v
            ]
        return iter(self._edge_cache)

    @property
    def num_edges(self) -> int:
        return sum(1 for _ in self.edges())

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges())

    def subset_volume(self, vertices: Iterable[int]) -> float:
        total = 0.0
        for u in vertices:
            self._check_vertex(u)
            total += float(self.degree[u])
        return total

    def _check_vertex(self, u: int):
        if not 0 <= u < self.n:
            raise DomainError(f"Vertex {u} out of range for graph with {self.n} vertices")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges}, weight={self.total_weight:g})"


def _check_edge(n: int, u: int, v: int, w: float):
    if not (0 <= u < n and 0 <= v < n):
        raise DomainError(f"Edge ({u}, {v}) out of range for {n} vertices")
    if u == v:
        raise DomainError(f"Self-loop on vertex {u}")
    if not math.isfinite(w) or w <= 0:
        raise DomainError(f"Edge ({u}, {v}) has non-positive or non-finite weight {w}")


def subset_volume(g: Graph, vertices: Iterable[int]) -> float:
    return g.subset_volume(vertices)


@dataclass(frozen=True)
class EdgeListDialect:
    """
    Edge-list text dialect.

    Lines are ``u v`` or ``u v w``; a single token declares a vertex with no
    edges so isolated vertices survive a write/load round trip.
    """

    comment_prefixes: Tuple[str, ...] = COMMENT_PREFIXES
    delimiter: Optional[str] = None  # None splits on any whitespace
    encoding: str = "utf-8"


def load_edge_list(
    source: Union[str, Path, IO[bytes], IO[str]],
    dialect: Optional[EdgeListDialect] = None
) -> Graph:
    """
    Parse an edge list into a Graph.

    Vertex labels are mapped to dense indices in first-appearance order and
    kept on ``graph.labels``. Duplicate edges are merged by summing weights.
    """
    dialect = dialect or EdgeListDialect()

    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return load_edge_list(fh, dialect)

    labels: Dict[str, int] = {}
    weights: Dict[Tuple[int, int], float] = {}

    def vertex(token: str) -> int:
        if token not in labels:
            labels[token] = len(labels)
        return labels[token]

    for line_number, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                text = raw.decode(dialect.encoding)
            except UnicodeDecodeError:
                raise GraphParseError(f"not valid {dialect.encoding} text", line_number) from None
        else:
            text = raw
        line = text.strip()
        if not line or line.startswith(dialect.comment_prefixes):
            continue

        tokens = line.split(dialect.delimiter)
        if len(tokens) == 1:
            vertex(tokens[0])
            continue
        if len(tokens) not in (2, 3):
            raise GraphParseError(f"expected 'u v' or 'u v w', got {len(tokens)} fields", line_number)

        weight = 1.0
        if len(tokens) == 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise GraphParseError(f"weight {tokens[2]!r} is not a number", line_number) from None
            if not math.isfinite(weight) or weight <= 0:
                raise DomainError(f"line {line_number}: weight must be positive, got {tokens[2]}")

        if tokens[0] == tokens[1]:
            raise DomainError(f"line {line_number}: self-loop on vertex {tokens[0]!r}")

        u, v = vertex(tokens[0]), vertex(tokens[1])
        key = (u, v) if u < v else (v, u)
        weights[key] = weights.get(key, 0.0) + weight

    graph = Graph.from_edges(
        len(labels),
        ((u, v, w) for (u, v), w in weights.items()),
        VertexLabels(tuple(labels))
    )
    logger.debug(f"Loaded edge list: {graph}")
    return graph


def format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_edge_list(g: Graph, sink: Union[str, Path, IO[str]]):
    """Write ``g`` in the dialect ``load_edge_list`` reads, isolated vertices included"""
    if isinstance(sink, (str, Path)):
        Path(sink).parent.mkdir(parents=True, exist_ok=True)
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            write_edge_list(g, fh)
            return

    # Declare every vertex first so labels map back to the same indices
    for u in range(g.n):
        sink.write(f"{g.labels.label_of(u)}\n")
    for u, v, w in g.edges():
        sink.write(f"{g.labels.label_of(u)} {g.labels.label_of(v)} {format_weight(w)}\n")


def complete_graph(n: int, weight: float = 1.0) -> Graph:
    """K_n with every edge weighted ``weight``"""
    return Graph.from_edges(n, ((u, v, weight) for u in range(n) for v in range(u + 1, n)))
