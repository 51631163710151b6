from typing import Callable, List

import numpy as np
import pytest

from src.graph.core import Graph, complete_graph
from src.tree.cluster_tree import ClusterTree


def _random_nested(rng: np.random.Generator, items: List[int]):
    if len(items) == 1:
        return items[0]
    k = int(rng.integers(2, min(len(items), 4) + 1))
    assignment = rng.integers(0, k, size=len(items))
    groups = [[x for x, a in zip(items, assignment) if a == i] for i in range(k)]
    groups = [g for g in groups if g]
    if len(groups) < 2:
        groups = [items[:1], items[1:]]
    return [_random_nested(rng, g) for g in groups]


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k5():
    return complete_graph(5)


@pytest.fixture
def k6():
    return complete_graph(6)


@pytest.fixture
def path4():
    return Graph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])


@pytest.fixture
def star():
    # Centre 0 with three leaves
    return Graph.from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)])


@pytest.fixture
def two_triangles():
    # Triangles {0, 1, 2} and {3, 4, 5} joined by the bridge 2-3
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    return Graph.from_edges(6, [(u, v, 1.0) for u, v in edges])


@pytest.fixture
def balanced_k4(k4):
    return ClusterTree.from_nested(k4, [[0, 1], [2, 3]])


@pytest.fixture
def caterpillar_k4(k4):
    return ClusterTree.from_nested(k4, [[[0, 1], 2], 3])


@pytest.fixture
def random_graph() -> Callable[..., Graph]:
    def make(seed: int, n: int, density: float = 0.4, weighted: bool = True) -> Graph:
        rng = np.random.default_rng(seed)
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < density:
                    w = float(10.0 - rng.uniform(0.0, 10.0)) if weighted else 1.0
                    edges.append((u, v, w))
        if not edges:
            edges.append((0, 1, 1.0))
        return Graph.from_edges(n, edges)

    return make


@pytest.fixture
def random_tree() -> Callable[[Graph, int], ClusterTree]:
    def make(g: Graph, seed: int) -> ClusterTree:
        rng = np.random.default_rng(seed)
        return ClusterTree.from_nested(g, _random_nested(rng, list(range(g.n))))

    return make
