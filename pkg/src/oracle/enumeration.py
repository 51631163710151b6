"""
Exhaustive cluster-tree enumeration for small graphs.

Binary topologies come from inserting leaf k into every edge of every
topology over leaves 0..k-1 (plus above the root), which yields each of
the (2n-3)!! trees once. Multifurcating topologies split a leaf set into
two or more blocks at the root and recurse into every block.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from src.config.constants import ARGMIN_TOLERANCE, MAX_BINARY_LEAVES, MAX_MULTIFURCATING_LEAVES
from src.config.settings import TreeMode
from src.costs.entropy import concave_exp, cost_concave, cost_dasgupta, cost_se
from src.graph.core import Graph
from src.tree.cluster_tree import ClusterTree
from src.utils.errors import DomainError, EnumerationLimitError

Topology = Union[int, Tuple["Topology", ...]]
CostFunction = Callable[[Graph, ClusterTree], float]


def _binary_topologies(n: int) -> Iterator[Topology]:
    if n == 1:
        yield 0
        return
    for tree in _binary_topologies(n - 1):
        yield from _insertions(tree, n - 1)


def _insertions(tree: Topology, leaf: int) -> Iterator[Topology]:
    yield (tree, leaf)
    if isinstance(tree, tuple):
        left, right = tree
        for sub in _insertions(left, leaf):
            yield (sub, right)
        for sub in _insertions(right, leaf):
            yield (left, sub)


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def _multifurcating_topologies(items: Tuple[int, ...]) -> Iterator[Topology]:
    if len(items) == 1:
        yield items[0]
        return
    for partition in _set_partitions(items):
        if len(partition) < 2:
            continue
        blocks = sorted(partition, key=lambda b: b[0])
        subtrees = [list(_multifurcating_topologies(tuple(b))) for b in blocks]
        yield from itertools.product(*subtrees)


def _check_bounds(n: int, mode: TreeMode):
    if n < 1:
        raise DomainError(f"Need at least one leaf, got {n}")
    bound = MAX_BINARY_LEAVES if mode == TreeMode.BINARY else MAX_MULTIFURCATING_LEAVES
    if n > bound:
        raise EnumerationLimitError(
            f"{mode.value} enumeration is limited to {bound} leaves, got {n}; "
            f"use a smaller graph or the heuristic 'cluster' command"
        )


def enumerate_topologies(n: int, mode: TreeMode = TreeMode.BINARY) -> Iterator[Topology]:
    """Nested tuples over leaves 0..n-1, one per distinct tree"""
    mode = TreeMode(mode)
    _check_bounds(n, mode)
    if mode == TreeMode.BINARY:
        return _binary_topologies(n)
    return _multifurcating_topologies(tuple(range(n)))


def enumerate_trees(n: int, mode: TreeMode = TreeMode.BINARY, graph: Optional[Graph] = None) -> Iterator[ClusterTree]:
    """Stream every cluster tree over n labeled leaves, caches filled from ``graph``"""
    mode = TreeMode(mode)
    _check_bounds(n, mode)
    if graph is None:
        graph = Graph.from_edges(n, [])
    elif graph.n != n:
        raise DomainError(f"Graph has {graph.n} vertices, enumeration asked for {n}")

    for topology in enumerate_topologies(n, mode):
        nested = topology if isinstance(topology, tuple) else (topology,)
        yield ClusterTree.from_nested(graph, nested)


@dataclass
class BruteForceResult:
    min_value: float
    argmin: List[ClusterTree] = field(default_factory=list)
    evaluated: int = 0


def brute_min(g: Graph, cost: CostFunction, mode: TreeMode = TreeMode.BINARY) -> BruteForceResult:
    """Exact minimum of ``cost`` over all trees, with every tree within tolerance of it"""
    def near_best(value: float) -> bool:
        return value <= best + ARGMIN_TOLERANCE * max(1.0, abs(best))

    best = math.inf
    candidates: List[Tuple[float, ClusterTree]] = []
    evaluated = 0
    for tree in enumerate_trees(g.n, mode, g):
        value = cost(g, tree)
        evaluated += 1
        if value < best:
            best = value
            candidates = [(v, t) for v, t in candidates if near_best(v)]
        if near_best(value):
            candidates.append((value, tree))

    logger.info(f"Evaluated {evaluated} {TreeMode(mode).value} trees; minimum {best:.9g} reached by {len(candidates)}")
    return BruteForceResult(best, [t for _, t in candidates], evaluated)


def gamma_cost(t: ClusterTree) -> float:
    """Sum over internal nodes with child leaf sets A, B of |A| * |B| * log2(|A| + |B|)"""
    sizes = t.leaf_counts()
    total = 0.0
    for node_id in t.internal_nodes():
        children = t.nodes[node_id].children
        if len(children) != 2:
            raise DomainError(f"Node {node_id} has {len(children)} children; the split cost needs a binary tree")
        a, b = sizes[children[0]], sizes[children[1]]
        total += a * b * math.log2(a + b)
    return total


def is_balanced_binary(t: ClusterTree) -> bool:
    """Every internal node splits its leaves into halves of sizes floor(k/2) and ceil(k/2)"""
    sizes = t.leaf_counts()
    for node_id in t.internal_nodes():
        children = t.nodes[node_id].children
        if len(children) != 2 or abs(sizes[children[0]] - sizes[children[1]]) > 1:
            return False
    return True


def root_split_sizes(t: ClusterTree) -> Tuple[int, ...]:
    sizes = t.leaf_counts()
    return tuple(sorted(sizes[c] for c in t.nodes[t.root].children))


COST_FUNCTIONS: Dict[str, CostFunction] = {
    "se": cost_se,
    "dasgupta": cost_dasgupta,
    "concave-exp": lambda g, t: cost_concave(g, t, concave_exp),
    "gamma": lambda g, t: gamma_cost(t),
}


def resolve_cost(name: str) -> CostFunction:
    try:
        return COST_FUNCTIONS[name]
    except KeyError:
        raise DomainError(f"Unknown cost {name!r}; choose from {sorted(COST_FUNCTIONS)}") from None
