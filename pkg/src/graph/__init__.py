from .core import (
    EdgeListDialect,
    Graph,
    VertexLabels,
    complete_graph,
    load_edge_list,
    subset_volume,
    write_edge_list,
)
from .quotient import QuotientGraph, quotient

__all__ = [
    "EdgeListDialect",
    "Graph",
    "VertexLabels",
    "complete_graph",
    "load_edge_list",
    "subset_volume",
    "write_edge_list",
    "QuotientGraph",
    "quotient",
]
