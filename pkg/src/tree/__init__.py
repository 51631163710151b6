from .cluster_tree import ClusterTree, TreeNode, lca, levels, recompute_caches, trivial_tree
from .serialization import deserialize, dumps_tree, read_tree, serialize, write_tree

__all__ = [
    "ClusterTree",
    "TreeNode",
    "lca",
    "levels",
    "recompute_caches",
    "trivial_tree",
    "deserialize",
    "dumps_tree",
    "read_tree",
    "serialize",
    "write_tree",
]
