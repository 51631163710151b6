"""
Tree documents: JSON, human-diffable, leaves referenced by vertex label.

    {"version": 1,
     "root": {"name": "root",
              "children": [{"name": "root.0", "children": [{"leaf": "a"}, {"leaf": "b"}]},
                           {"name": "root.1", "children": [{"leaf": "c"}, {"leaf": "d"}]}]}}

Internal nodes carry ``children`` (non-empty) and an optional ``name``;
leaves carry only ``leaf``. Node ids are not part of the format.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from src.config.constants import TREE_DOCUMENT_VERSION
from src.graph.core import Graph
from src.tree.cluster_tree import ClusterTree, TreeNode
from src.utils.errors import DocumentError


class TreeDocumentNode(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    leaf: Optional[str] = None
    children: Optional[List["TreeDocumentNode"]] = None

    @model_validator(mode="after")
    def check_shape(self):
        if (self.leaf is None) == (self.children is None):
            raise ValueError("a node needs exactly one of 'leaf' or 'children'")
        if self.children is not None and not self.children:
            raise ValueError("'children' must not be empty")
        if self.leaf is not None and self.name is not None:
            raise ValueError("leaves are named by 'leaf' only")
        return self


TreeDocumentNode.model_rebuild()


class TreeDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int = TREE_DOCUMENT_VERSION
    root: TreeDocumentNode

    @model_validator(mode="after")
    def check_root(self):
        if self.version != TREE_DOCUMENT_VERSION:
            raise ValueError(f"unsupported tree document version {self.version}")
        if self.root.children is None:
            raise ValueError("the root must be an internal node")
        return self


def serialize(t: ClusterTree) -> Dict[str, Any]:
    def render(node_id: int, name: str) -> Dict[str, Any]:
        node = t.nodes[node_id]
        if node.is_leaf:
            return {"leaf": t.labels.label_of(node_id)}
        return {
            "name": name,
            "children": [render(c, f"{name}.{i}") for i, c in enumerate(node.children)]
        }

    return {"version": TREE_DOCUMENT_VERSION, "root": render(t.root, "root")}


def dumps_tree(t: ClusterTree) -> str:
    return json.dumps(serialize(t), indent=2) + "\n"


def write_tree(t: ClusterTree, path: Union[str, Path]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_tree(t), encoding="utf-8")


def deserialize(doc: Union[Dict[str, Any], str], g: Graph) -> ClusterTree:
    """
    Rebuild a tree against graph ``g``. Leaf labels must be a bijection
    with ``g``'s vertex labels; caches are recomputed from ``g``.
    """
    try:
        if isinstance(doc, str):
            document = TreeDocument.model_validate_json(doc)
        else:
            document = TreeDocument.model_validate(doc)
    except ValidationError as e:
        raise DocumentError(f"Invalid tree document: {e}") from None

    root = g.n
    nodes: Dict[int, TreeNode] = {root: TreeNode(root, parent=root)}
    next_id = root + 1
    seen = set()
    stack = [(root, document.root)]
    while stack:
        node_id, spec = stack.pop()
        for child in spec.children or []:
            if child.leaf is not None:
                if child.leaf not in g.labels:
                    raise DocumentError(f"Leaf {child.leaf!r} is not a vertex of the graph")
                vertex = g.labels.index_of(child.leaf)
                if vertex in seen:
                    raise DocumentError(f"Duplicate leaf label {child.leaf!r}")
                seen.add(vertex)
                nodes[vertex] = TreeNode(vertex, parent=node_id)
                nodes[node_id].children.append(vertex)
            else:
                nodes[next_id] = TreeNode(next_id, parent=node_id)
                nodes[node_id].children.append(next_id)
                stack.append((next_id, child))
                next_id += 1

    if len(seen) != g.n:
        missing = [g.labels.label_of(v) for v in range(g.n) if v not in seen]
        raise DocumentError(f"Tree document misses {len(missing)} vertices, e.g. {missing[:5]}")

    tree = ClusterTree(g.n, nodes, root, g.labels)
    return tree.recompute_caches(g)


def read_tree(path: Union[str, Path], g: Graph) -> ClusterTree:
    return deserialize(Path(path).read_text(encoding="utf-8"), g)
