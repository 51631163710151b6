"""
Local restructuring of one u-triangle (an internal node and its children).

A triangle is reduced to the quotient graph of its children clusters.
Stretch merges sibling clusters pairwise, best ranked pair first,
producing a binary subtree rooted at the apex; compress then contracts
the cheapest edges until every original child sits two levels below the
apex. Both work on a StagedSubtree and never touch the global tree.
"""

import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from loguru import logger

from src.config.settings import LocalEntropyVariant, StretchOrder
from src.graph.core import Graph
from src.graph.quotient import QuotientGraph, quotient
from src.tree.cluster_tree import ClusterTree
from src.utils.errors import DomainError


@dataclass(frozen=True)
class Triangle:
    apex: int
    leaves: Tuple[int, ...]
    local: QuotientGraph
    apex_volume: float
    total_volume: float


def build_triangle(t: ClusterTree, g: Graph, u: int) -> Triangle:
    node = t.node(u)
    if node.is_leaf:
        raise DomainError(f"Node {u} is a leaf; triangles are rooted at internal nodes")
    children = tuple(node.children)
    local = quotient(g, {c: t.leaves_under(c) for c in children})
    return Triangle(
        apex=u,
        leaves=children,
        local=local,
        apex_volume=node.volume,
        total_volume=g.total_volume
    )


def entropy_term(cut: float, volume: float, parent_volume: float, total_volume: float) -> float:
    """Contribution of one node to structural entropy"""
    if volume <= 0 or cut <= 0 or total_volume <= 0:
        return 0.0
    return cut / total_volume * math.log2(parent_volume / volume)


def merge_gain_value(link: float, vol_a: float, vol_b: float, apex_volume: float, total_volume: float) -> float:
    """
    Entropy reduced by giving siblings a and b a new common parent under
    the apex. Equals (g_a + g_b - g_new) / vol(V) * log2(vol(apex) / vol_new)
    with g_new = g_a + g_b - 2 * link.
    """
    merged = vol_a + vol_b
    if link <= 0 or merged <= 0 or total_volume <= 0:
        return 0.0
    return 2.0 * link / total_volume * math.log2(apex_volume / merged)


def contraction_penalty(children_cut: float, cut: float, volume: float, parent_volume: float, total_volume: float) -> float:
    """
    Entropy added by contracting a node into its parent: twice the weight
    linking its children to each other, times log2(vol(parent) / vol(node)).
    """
    if volume <= 0 or total_volume <= 0:
        return 0.0
    return max(0.0, children_cut - cut) / total_volume * math.log2(parent_volume / volume)


def local_entropy(
    t: ClusterTree,
    g: Graph,
    u: int,
    variant: LocalEntropyVariant = LocalEntropyVariant.CHILD_CUT
) -> float:
    """Partial sum of structural entropy over the children terms of ``u``"""
    node = t.node(u)
    if node.is_leaf:
        raise DomainError(f"Node {u} is a leaf")
    if g.total_volume <= 0:
        raise DomainError("Entropy is undefined for a graph without edges")
    total = 0.0
    for c in node.children:
        child = t.nodes[c]
        cut = child.cut if variant == LocalEntropyVariant.CHILD_CUT else node.cut
        total += entropy_term(cut, child.volume, node.volume, g.total_volume)
    return total


@dataclass
class StagedNode:
    node_id: int
    volume: float
    cut: float
    member_cut: float  # summed cuts of the original children below
    children: List[int] = field(default_factory=list)
    parent: Optional[int] = None  # None: directly under the apex

    @property
    def is_original(self) -> bool:
        return not self.children


class StagedSubtree:
    """
    Working copy of a triangle. Original children keep their tree ids;
    nodes created by merging are numbered from ``first_id`` upward.
    """

    def __init__(self, triangle: Triangle, first_id: int, order: StretchOrder = StretchOrder.FLATTENED):
        self.triangle = triangle
        self.order = order
        self.apex = triangle.apex
        self.apex_volume = triangle.apex_volume
        self.total_volume = triangle.total_volume
        local = triangle.local
        self.nodes: Dict[int, StagedNode] = {
            c: StagedNode(c, local.cluster_volume[c], local.cluster_cut[c], local.cluster_cut[c])
            for c in triangle.leaves
        }
        self.top: Set[int] = set(triangle.leaves)
        self.links: Dict[int, Dict[int, float]] = {
            c: dict(local.links(c)) for c in triangle.leaves
        }
        self.penalties: List[float] = []
        self._next_id = first_id

    @classmethod
    def from_triangle(
        cls,
        triangle: Triangle,
        first_id: Optional[int] = None,
        order: StretchOrder = StretchOrder.FLATTENED
    ) -> "StagedSubtree":
        if first_id is None:
            first_id = max(triangle.leaves + (triangle.apex,)) + 1
        return cls(triangle, first_id, order)

    # Stretch

    def merge_gain(self, a: int, b: int) -> float:
        if a == b or a not in self.top or b not in self.top:
            raise DomainError(f"Nodes {a} and {b} are not distinct siblings under apex {self.apex}")
        return merge_gain_value(
            self.links[a].get(b, 0.0),
            self.nodes[a].volume,
            self.nodes[b].volume,
            self.apex_volume,
            self.total_volume
        )

    def merge(self, a: int, b: int) -> int:
        link = self.links[a].get(b, 0.0)
        gamma = self._next_id
        self._next_id += 1
        node_a, node_b = self.nodes[a], self.nodes[b]
        self.nodes[gamma] = StagedNode(
            gamma,
            volume=node_a.volume + node_b.volume,
            cut=max(0.0, node_a.cut + node_b.cut - 2.0 * link),
            member_cut=node_a.member_cut + node_b.member_cut,
            children=[a, b]
        )
        node_a.parent = gamma
        node_b.parent = gamma

        merged: Dict[int, float] = {}
        for x in (a, b):
            for y, w in self.links.pop(x).items():
                if y in (a, b):
                    continue
                merged[y] = merged.get(y, 0.0) + w
                del self.links[y][x]
        for y, w in merged.items():
            self.links[y][gamma] = w
        self.links[gamma] = merged

        self.top.difference_update((a, b))
        self.top.add(gamma)
        return gamma

    def flattening_penalty(self, node_id: int, parent_volume: float) -> float:
        """
        Entropy added by hanging the original children under ``node_id``
        straight from a parent of ``parent_volume``. Zero for an original.
        """
        node = self.nodes[node_id]
        if node.is_original:
            return 0.0
        return contraction_penalty(node.member_cut, node.cut, node.volume, parent_volume, self.total_volume)

    def merge_priority(self, a: int, b: int) -> float:
        """
        Rank of a sibling pair during stretch. Under the flattened order this
        is the entropy reduced by pooling the groups of a and b into one flat
        group; for two original children it equals the merge gain.
        """
        gain = self.merge_gain(a, b)
        if self.order == StretchOrder.INSERTION:
            return gain
        merged = self.nodes[a].volume + self.nodes[b].volume
        return gain - self.flattening_penalty(a, merged) - self.flattening_penalty(b, merged)

    def stretch(self) -> "StagedSubtree":
        """
        Merge the best ranked sibling pair until two clusters remain under
        the apex; the final merge is the apex itself. Ties go to the
        smallest (a, b) id pair.
        """
        heap: List[Tuple[float, int, int]] = []
        for a in sorted(self.top):
            for b in self.links[a]:
                if a < b:
                    heap.append((-self.merge_priority(a, b), a, b))
        heapq.heapify(heap)

        while len(self.top) > 2:
            while heap and (heap[0][1] not in self.top or heap[0][2] not in self.top):
                heapq.heappop(heap)

            # Unlinked pairs rank at zero under insertion and last under flattened
            if heap and (heap[0][0] < 0 or self.order == StretchOrder.FLATTENED):
                pair = (heap[0][1], heap[0][2])
            else:
                first, second = heapq.nsmallest(2, self.top)
                pair = (first, second)

            priority = self.merge_priority(*pair)
            gamma = self.merge(*pair)
            logger.debug(f"apex {self.apex}: merged {pair} into {gamma} (priority {priority:.6g})")
            for y in sorted(self.links[gamma]):
                a, b = (y, gamma) if y < gamma else (gamma, y)
                heapq.heappush(heap, (-self.merge_priority(a, b), a, b))
        return self

    # Compress

    def parent_volume(self, node_id: int) -> float:
        parent = self.nodes[node_id].parent
        return self.apex_volume if parent is None else self.nodes[parent].volume

    def compress_penalty(self, node_id: int) -> float:
        node = self.nodes.get(node_id)
        if node is None:
            raise DomainError(f"Node {node_id} is not in the staged subtree of apex {self.apex}")
        if node.is_original:
            raise DomainError(f"Node {node_id} is an original child and cannot be contracted")
        children_cut = sum(self.nodes[c].cut for c in node.children)
        return contraction_penalty(children_cut, node.cut, node.volume, self.parent_volume(node_id), self.total_volume)

    def contract(self, node_id: int):
        node = self.nodes.pop(node_id)
        for c in node.children:
            self.nodes[c].parent = node.parent
        if node.parent is None:
            self.top.discard(node_id)
            self.top.update(node.children)
        else:
            siblings = self.nodes[node.parent].children
            position = siblings.index(node_id)
            siblings[position:position + 1] = node.children

    def _profile(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        """Depth below the apex and height of the subtree under each node"""
        depth: Dict[int, int] = {}
        order: List[int] = []
        stack = [(c, 1) for c in sorted(self.top)]
        while stack:
            node_id, d = stack.pop()
            depth[node_id] = d
            order.append(node_id)
            stack.extend((c, d + 1) for c in self.nodes[node_id].children)
        below: Dict[int, int] = {}
        for node_id in reversed(order):
            children = self.nodes[node_id].children
            below[node_id] = 1 + max(below[c] for c in children) if children else 0
        return depth, below

    def height(self) -> int:
        depth, below = self._profile()
        return max((depth[c] + below[c] for c in self.top), default=0)

    def compress(self) -> "StagedSubtree":
        """
        Contract the cheapest edge lying on a root-to-leaf path longer than
        two until the subtree has height at most two. Ties go to the
        smallest node id.
        """
        while True:
            depth, below = self._profile()
            candidates = [
                node_id for node_id, node in self.nodes.items()
                if not node.is_original and depth[node_id] + below[node_id] > 2
            ]
            if not candidates:
                return self
            penalty, node_id = min((self.compress_penalty(c), c) for c in candidates)
            self.contract(node_id)
            self.penalties.append(penalty)
            logger.debug(f"apex {self.apex}: contracted {node_id} (penalty {penalty:.6g})")

    # Entropy bookkeeping

    def local_entropy(self) -> float:
        """Entropy of every staged node's term, original children included"""
        return sum(
            entropy_term(node.cut, node.volume, self.parent_volume(node_id), self.total_volume)
            for node_id, node in self.nodes.items()
        )

    def flat_entropy(self) -> float:
        return sum(
            entropy_term(self.nodes[c].cut, self.nodes[c].volume, self.apex_volume, self.total_volume)
            for c in self.triangle.leaves
        )

    def reduction(self) -> float:
        return self.flat_entropy() - self.local_entropy()

    def groups(self) -> List[Tuple[List[int], float]]:
        """
        The new intermediate level as (original children, cut) pairs, one per
        node directly under the apex. An original child standing alone under
        the apex becomes a singleton group.
        """
        groups = []
        for node_id in sorted(self.top):
            node = self.nodes[node_id]
            members = sorted(node.children) if node.children else [node_id]
            groups.append((members, node.cut))
        return groups


def merge_gain(tri: Triangle, a: int, b: int) -> float:
    return StagedSubtree.from_triangle(tri).merge_gain(a, b)


def stretch(
    tri: Triangle,
    first_id: Optional[int] = None,
    order: StretchOrder = StretchOrder.FLATTENED
) -> StagedSubtree:
    return StagedSubtree.from_triangle(tri, first_id, order).stretch()


def compress(subtree: StagedSubtree) -> StagedSubtree:
    return subtree.compress()


def compress_penalty(t: ClusterTree, g: Graph, v: int) -> float:
    """Entropy added by contracting tree edge (parent(v), v) of a full cluster tree"""
    node = t.node(v)
    if node.is_leaf:
        raise DomainError(f"Node {v} is a leaf; only internal edges can be contracted")
    if v == t.root:
        raise DomainError("The root has no parent edge")
    children_cut = sum(t.nodes[c].cut for c in node.children)
    return contraction_penalty(children_cut, node.cut, node.volume, t.nodes[node.parent].volume, g.total_volume)
