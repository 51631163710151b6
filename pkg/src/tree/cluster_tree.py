"""
Rooted cluster tree over graph vertices.

Leaves carry node ids 0..n-1, equal to the vertex they hold, so the
leaf of vertex v is always node v. Internal nodes are numbered from n
upward in creation order and keep their ids across edits.
"""

import numbers
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Union

from src.config.constants import CACHE_TOLERANCE
from src.graph.core import Graph, VertexLabels
from src.utils.errors import DomainError, TreeIntegrityError

Nested = Union[int, Sequence["Nested"]]


@dataclass
class TreeNode:
    node_id: int
    parent: int
    children: List[int] = field(default_factory=list)
    volume: float = 0.0
    cut: float = 0.0
    depth: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children


class ClusterTree:
    def __init__(self, n_vertices: int, nodes: Dict[int, TreeNode], root: int, labels: Optional[VertexLabels] = None):
        self.n_vertices = n_vertices
        self.nodes = nodes
        self.root = root
        self.labels = labels or VertexLabels.default(n_vertices)
        self._next_id = max(nodes) + 1 if nodes else n_vertices + 1

    # Construction

    @classmethod
    def trivial(cls, g: Graph) -> "ClusterTree":
        if g.n < 1:
            raise DomainError("Cannot build a cluster tree for an empty graph")
        root = g.n
        nodes = {v: TreeNode(v, parent=root) for v in range(g.n)}
        nodes[root] = TreeNode(root, parent=root, children=list(range(g.n)))
        tree = cls(g.n, nodes, root, g.labels)
        tree.recompute_caches(g)
        return tree

    @classmethod
    def from_nested(cls, g: Graph, nested: Nested) -> "ClusterTree":
        """
        Build a tree from nested sequences of vertex indices, e.g.
        ``[[0, 1], [2, 3]]``. The outermost sequence is the root.
        """
        if g.n < 1:
            raise DomainError("Cannot build a cluster tree for an empty graph")
        if isinstance(nested, numbers.Integral):
            nested = [nested]

        root = g.n
        nodes: Dict[int, TreeNode] = {root: TreeNode(root, parent=root)}
        next_id = root + 1
        seen = set()
        stack = [(root, nested)]
        while stack:
            node_id, spec = stack.pop()
            if len(spec) == 0:
                raise DomainError("Nested tree contains an empty cluster")
            for item in spec:
                if isinstance(item, numbers.Integral):
                    if not 0 <= item < g.n:
                        raise DomainError(f"Vertex {item} out of range for graph with {g.n} vertices")
                    if item in seen:
                        raise DomainError(f"Vertex {item} appears twice in nested tree")
                    seen.add(item)
                    nodes[item] = TreeNode(item, parent=node_id)
                    nodes[node_id].children.append(item)
                else:
                    child = next_id
                    next_id += 1
                    nodes[child] = TreeNode(child, parent=node_id)
                    nodes[node_id].children.append(child)
                    stack.append((child, item))

        if len(seen) != g.n:
            missing = sorted(set(range(g.n)) - seen)
            raise DomainError(f"Nested tree misses vertices {missing[:10]}")

        tree = cls(g.n, nodes, root, g.labels)
        tree.recompute_caches(g)
        return tree

    def copy(self) -> "ClusterTree":
        nodes = {
            i: TreeNode(i, node.parent, list(node.children), node.volume, node.cut, node.depth)
            for i, node in self.nodes.items()
        }
        tree = ClusterTree(self.n_vertices, nodes, self.root, self.labels)
        tree._next_id = self._next_id
        return tree

    # Queries

    def node(self, node_id: int) -> TreeNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise DomainError(f"Unknown tree node {node_id}") from None

    def is_leaf(self, node_id: int) -> bool:
        return self.node(node_id).is_leaf

    def leaf_of(self, vertex: int) -> int:
        if not 0 <= vertex < self.n_vertices:
            raise DomainError(f"Vertex {vertex} not in tree over {self.n_vertices} vertices")
        return vertex

    @property
    def height(self) -> int:
        return max(self.nodes[v].depth for v in range(self.n_vertices))

    def internal_nodes(self) -> List[int]:
        return sorted(
            (i for i, node in self.nodes.items() if node.children),
            key=lambda i: (self.nodes[i].depth, i)
        )

    def preorder(self, start: Optional[int] = None) -> Iterator[int]:
        stack = [self.root if start is None else start]
        while stack:
            node_id = stack.pop()
            yield node_id
            stack.extend(reversed(self.nodes[node_id].children))

    def postorder(self, start: Optional[int] = None) -> List[int]:
        return list(reversed(list(self._reverse_postorder(start))))

    def _reverse_postorder(self, start: Optional[int]) -> Iterator[int]:
        stack = [self.root if start is None else start]
        while stack:
            node_id = stack.pop()
            yield node_id
            stack.extend(self.nodes[node_id].children)

    def leaves_under(self, node_id: int) -> List[int]:
        self.node(node_id)
        return sorted(i for i in self.preorder(node_id) if self.nodes[i].is_leaf)

    def leaf_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for node_id in self.postorder():
            node = self.nodes[node_id]
            counts[node_id] = sum(counts[c] for c in node.children) if node.children else 1
        return counts

    def lca(self, u: int, v: int) -> int:
        """Deepest node containing both vertices ``u`` and ``v``"""
        if u == v:
            raise DomainError(f"lca needs two distinct vertices, got {u} twice")
        return self.lca_nodes(self.leaf_of(u), self.leaf_of(v))

    def lca_nodes(self, a: int, b: int) -> int:
        nodes = self.nodes
        while a != b:
            if nodes[a].depth > nodes[b].depth:
                a = nodes[a].parent
            elif nodes[b].depth > nodes[a].depth:
                b = nodes[b].parent
            else:
                a, b = nodes[a].parent, nodes[b].parent
        return a

    def levels(self) -> List[List[int]]:
        """Internal nodes grouped by depth: U_0 = [root], ..., U_{h-1}"""
        leaf_depths = {self.nodes[v].depth for v in range(self.n_vertices)}
        if len(leaf_depths) != 1:
            raise DomainError(f"Tree has leaves at depths {sorted(leaf_depths)}; levels need uniform depth")
        height = leaf_depths.pop()
        levels: List[List[int]] = [[] for _ in range(height)]
        for node_id in self.internal_nodes():
            levels[self.nodes[node_id].depth].append(node_id)
        return levels

    # Structural edits

    def insert_node(self, parent: int, children: Sequence[int], cut: float) -> int:
        """
        Insert a new node under ``parent`` that adopts ``children``.
        Volume is summed from the children; the caller supplies the cut.
        """
        parent_node = self.node(parent)
        if not children:
            raise DomainError("Inserted node needs at least one child")
        for c in children:
            if self.node(c).parent != parent or c == parent:
                raise DomainError(f"Node {c} is not a child of {parent}")

        new_id = self._next_id
        self._next_id += 1
        adopted = set(children)
        position = min(parent_node.children.index(c) for c in children)
        remaining = [c for c in parent_node.children if c not in adopted]
        parent_node.children = remaining[:position] + [new_id] + remaining[position:]

        node = TreeNode(
            new_id,
            parent=parent,
            children=list(children),
            volume=sum(self.nodes[c].volume for c in children),
            cut=cut,
            depth=parent_node.depth + 1
        )
        self.nodes[new_id] = node
        for c in children:
            self.nodes[c].parent = new_id
        self._refresh_depths(new_id)
        return new_id

    def contract(self, node_id: int):
        """Remove internal non-root ``node_id``; its children move to its parent"""
        node = self.node(node_id)
        if node.is_leaf:
            raise DomainError(f"Cannot contract leaf {node_id}")
        if node_id == self.root:
            raise DomainError("Cannot contract the root")
        parent = self.nodes[node.parent]
        position = parent.children.index(node_id)
        parent.children[position:position + 1] = node.children
        for c in node.children:
            self.nodes[c].parent = node.parent
            self._refresh_depths(c)
        del self.nodes[node_id]

    def _refresh_depths(self, start: int):
        base = self.nodes[start]
        base.depth = 0 if start == self.root else self.nodes[base.parent].depth + 1
        for node_id in self.preorder(start):
            for c in self.nodes[node_id].children:
                self.nodes[c].depth = self.nodes[node_id].depth + 1

    # Caches

    def _validated_preorder(self) -> List[int]:
        root = self.nodes.get(self.root)
        if root is None or root.parent != self.root:
            raise TreeIntegrityError("Root must exist and be its own parent")

        order: List[int] = []
        visited = set()
        stack = [self.root]
        while stack:
            node_id = stack.pop()
            if node_id in visited:
                raise TreeIntegrityError(f"Node {node_id} reached twice (cycle or shared child)")
            visited.add(node_id)
            order.append(node_id)
            for c in reversed(self.nodes[node_id].children):
                child = self.nodes.get(c)
                if child is None:
                    raise TreeIntegrityError(f"Node {node_id} lists unknown child {c}")
                if child.parent != node_id:
                    raise TreeIntegrityError(f"Child {c} of {node_id} points to parent {child.parent}")
                stack.append(c)

        if len(visited) != len(self.nodes):
            orphans = sorted(set(self.nodes) - visited)
            raise TreeIntegrityError(f"Orphan nodes not reachable from root: {orphans[:10]}")

        leaves = {i for i in order if self.nodes[i].is_leaf}
        if leaves != set(range(self.n_vertices)):
            raise TreeIntegrityError("Leaves must be exactly the vertex ids 0..n-1")
        return order

    def recompute_caches(self, g: Graph) -> "ClusterTree":
        """Recompute depth, volume and cut of every node from ``g``"""
        if g.n != self.n_vertices:
            raise DomainError(f"Graph has {g.n} vertices, tree has {self.n_vertices} leaves")
        order = self._validated_preorder()
        nodes = self.nodes

        for node_id in order:
            node = nodes[node_id]
            node.depth = 0 if node_id == self.root else nodes[node.parent].depth + 1
            node.cut = 0.0

        for node_id in reversed(order):
            node = nodes[node_id]
            if node.is_leaf:
                node.volume = float(g.degree[node_id])
            else:
                node.volume = sum(nodes[c].volume for c in node.children)

        # An edge crosses the boundary of every node strictly below its endpoints' LCA
        for u, v, w in g.edges():
            a, b = u, v
            while a != b:
                if nodes[a].depth > nodes[b].depth:
                    nodes[a].cut += w
                    a = nodes[a].parent
                elif nodes[b].depth > nodes[a].depth:
                    nodes[b].cut += w
                    b = nodes[b].parent
                else:
                    nodes[a].cut += w
                    nodes[b].cut += w
                    a, b = nodes[a].parent, nodes[b].parent
        return self

    def check_caches(self, g: Graph, tolerance: float = CACHE_TOLERANCE):
        """Raise TreeIntegrityError if cached values drift from a fresh recomputation"""
        fresh = self.copy().recompute_caches(g)
        for node_id, node in self.nodes.items():
            other = fresh.nodes[node_id]
            if node.depth != other.depth:
                raise TreeIntegrityError(f"Node {node_id}: cached depth {node.depth}, actual {other.depth}")
            for attr in ("volume", "cut"):
                cached, actual = getattr(node, attr), getattr(other, attr)
                if abs(cached - actual) > tolerance * max(1.0, abs(actual)):
                    raise TreeIntegrityError(f"Node {node_id}: cached {attr} {cached}, actual {actual}")

    # Export

    def to_nested(self, node_id: Optional[int] = None) -> Nested:
        node_id = self.root if node_id is None else node_id
        node = self.nodes[node_id]
        if node.is_leaf:
            return node_id
        return [self.to_nested(c) for c in node.children]

    def to_newick(self) -> str:
        def quote(label: str) -> str:
            if any(ch in label for ch in " ()[],:;'\t"):
                return "'" + label.replace("'", "''") + "'"
            return label

        def render(node_id: int) -> str:
            node = self.nodes[node_id]
            if node.is_leaf:
                return quote(self.labels.label_of(node_id))
            return "(" + ",".join(render(c) for c in node.children) + ")"

        return render(self.root) + ";"

    def __repr__(self) -> str:
        return f"ClusterTree(vertices={self.n_vertices}, nodes={len(self.nodes)}, root={self.root})"


def trivial_tree(g: Graph) -> ClusterTree:
    return ClusterTree.trivial(g)


def lca(t: ClusterTree, u: int, v: int) -> int:
    return t.lca(u, v)


def levels(t: ClusterTree) -> List[List[int]]:
    return t.levels()


def recompute_caches(t: ClusterTree, g: Graph) -> ClusterTree:
    return t.recompute_caches(g)
