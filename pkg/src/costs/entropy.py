"""
Cost functionals on (graph, cluster tree) pairs.

All logarithms are base 2. Terms of the form 0 * log(0) and clusters
of zero volume contribute nothing.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from src.graph.core import Graph
from src.tree.cluster_tree import ClusterTree
from src.utils.errors import DomainError

SizeFunction = Callable[[int], float]


@dataclass
class CostReport:
    structural_entropy: float
    one_level_entropy: float
    cost_se: float
    cost_dasgupta: float
    height: int

    def to_record(self) -> Dict[str, float]:
        return {
            "structural_entropy": self.structural_entropy,
            "one_level_entropy": self.one_level_entropy,
            "cost_se": self.cost_se,
            "cost_dasgupta": self.cost_dasgupta,
            "height": self.height,
        }


def _check_pair(g: Graph, t: ClusterTree):
    if g.n != t.n_vertices:
        raise DomainError(f"Graph has {g.n} vertices but tree has {t.n_vertices} leaves")


def _check_volume(g: Graph):
    if g.total_volume <= 0:
        raise DomainError("Entropy is undefined for a graph without edges")


def one_level_entropy(g: Graph) -> float:
    _check_volume(g)
    p = g.degree[g.degree > 0] / g.total_volume
    return float(-(p * np.log2(p)).sum())


def structural_entropy(g: Graph, t: ClusterTree) -> float:
    _check_pair(g, t)
    _check_volume(g)
    total = 0.0
    for node_id, node in t.nodes.items():
        if node_id == t.root or node.volume <= 0 or node.cut <= 0:
            continue
        parent_volume = t.nodes[node.parent].volume
        total += node.cut * math.log2(parent_volume / node.volume)
    return total / g.total_volume


def cost_se(g: Graph, t: ClusterTree) -> float:
    """Sum over edges of w(u, v) * log2 vol(lca(u, v))"""
    _check_pair(g, t)
    return math.fsum(w * math.log2(t.nodes[t.lca_nodes(u, v)].volume) for u, v, w in g.edges())


def cost_dasgupta(g: Graph, t: ClusterTree) -> float:
    """Sum over edges of w(u, v) * |lca(u, v)|, sizes counted in leaves"""
    _check_pair(g, t)
    sizes = t.leaf_counts()
    return math.fsum(w * sizes[t.lca_nodes(u, v)] for u, v, w in g.edges())


def cost_concave(g: Graph, t: ClusterTree, f: SizeFunction) -> float:
    """Dasgupta's cost with the cluster size passed through ``f``"""
    _check_pair(g, t)
    sizes = t.leaf_counts()
    values: Dict[int, float] = {}
    terms = []
    for u, v, w in g.edges():
        size = sizes[t.lca_nodes(u, v)]
        if size not in values:
            try:
                value = float(f(size))
            except (ValueError, ArithmeticError) as e:
                raise DomainError(f"Size function failed at {size}: {e}") from None
            if not math.isfinite(value):
                raise DomainError(f"Size function is not finite at {size}: {value}")
            values[size] = value
        terms.append(w * values[size])
    return math.fsum(terms)


def concave_exp(size: int) -> float:
    return 1.0 - math.exp(-size)


def entropy_identity_residual(g: Graph, t: ClusterTree) -> float:
    """
    structural_entropy - (-sum_u d_u log2 d_u + 2 cost_se) / vol(V).

    Minimising structural entropy and minimising cost_se are the same
    problem because this residual is zero for every tree.
    """
    _check_volume(g)
    d = g.degree[g.degree > 0]
    degree_term = float((d * np.log2(d)).sum())
    return structural_entropy(g, t) - (2.0 * cost_se(g, t) - degree_term) / g.total_volume


def cost_report(g: Graph, t: ClusterTree) -> CostReport:
    return CostReport(
        structural_entropy=structural_entropy(g, t),
        one_level_entropy=one_level_entropy(g),
        cost_se=cost_se(g, t),
        cost_dasgupta=cost_dasgupta(g, t),
        height=t.height
    )
