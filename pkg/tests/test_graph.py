import io

import networkx as nx
import pytest

from src.graph.core import EdgeListDialect, Graph, VertexLabels, load_edge_list, subset_volume, write_edge_list
from src.utils.errors import DomainError, GraphParseError


def test_parallel_edges_are_merged():
    g = Graph.from_edges(3, [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 0.5)])

    assert g.weight(0, 1) == 3.0
    assert g.weight(1, 0) == 3.0
    assert g.num_edges == 2
    assert list(g.degree) == [3.0, 3.5, 0.5]
    assert g.total_volume == 7.0
    assert g.total_weight == 3.5
    assert repr(g) == "Graph(n=3, edges=2, weight=3.5)"


def test_edges_are_sorted_pairs(path4):
    assert list(path4.edges()) == [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]


@pytest.mark.parametrize("edge", [(0, 0, 1.0), (0, 1, 0.0), (0, 1, -2.0), (0, 5, 1.0), (0, 1, float("inf"))])
def test_invalid_edges_rejected(edge):
    with pytest.raises(DomainError):
        Graph.from_edges(3, [edge])


def test_isolated_vertex_has_zero_degree():
    g = Graph.from_edges(3, [(0, 1, 1.0)])

    assert g.degree[2] == 0.0
    assert dict(g.neighbors(2)) == {}
    assert g.subset_volume([0, 2]) == 1.0
    assert subset_volume(g, [0, 1, 2]) == 2.0


def test_degree_is_read_only(k4):
    with pytest.raises(ValueError):
        k4.degree[0] = 10.0


def test_load_edge_list_text():
    text = "# a comment\n\na b\nb c 2.5\nd\nc a\n"
    g = load_edge_list(io.StringIO(text))

    assert g.n == 4
    assert g.labels.labels == ("a", "b", "c", "d")
    assert g.weight(1, 2) == 2.5
    assert g.weight(0, 2) == 1.0
    assert g.degree[3] == 0.0


def test_load_edge_list_bytes_and_duplicates():
    g = load_edge_list(io.BytesIO(b"x y 1\ny x 2\n"))

    assert g.n == 2
    assert g.weight(0, 1) == 3.0


def test_load_edge_list_custom_dialect():
    g = load_edge_list(io.StringIO("% skip\na,b,4\n"), EdgeListDialect(comment_prefixes=("%",), delimiter=","))

    assert g.weight(0, 1) == 4.0


def test_load_edge_list_from_path(tmp_path):
    path = tmp_path / "graph.edges"
    path.write_text("1 2\n2 3\n", encoding="utf-8")

    g = load_edge_list(path)

    assert g.n == 3
    assert g.labels.index_of("3") == 2


def test_parse_errors_carry_line_numbers():
    with pytest.raises(GraphParseError) as exc:
        load_edge_list(io.StringIO("a b\na b c d\n"))
    assert exc.value.line_number == 2
    assert "line 2" in str(exc.value)

    with pytest.raises(GraphParseError) as exc:
        load_edge_list(io.StringIO("a b heavy\n"))
    assert exc.value.line_number == 1


def test_undecodable_line_is_a_parse_error(tmp_path):
    path = tmp_path / "graph.edges"
    path.write_bytes(b"0 1\n1 \xff\xfe\n")

    with pytest.raises(GraphParseError) as exc:
        load_edge_list(path)
    assert exc.value.line_number == 2


@pytest.mark.parametrize("text", ["a b -1\n", "a b 0\n", "a a 1\n"])
def test_domain_errors_in_edge_list(text):
    with pytest.raises(DomainError):
        load_edge_list(io.StringIO(text))


def test_write_then_load_preserves_graph(tmp_path):
    labels = VertexLabels(("u", "v", "w", "lonely"))
    g = Graph.from_edges(4, [(0, 1, 1.0), (1, 2, 0.25)], labels)
    path = tmp_path / "out" / "g.edges"

    write_edge_list(g, path)
    loaded = load_edge_list(path)

    assert loaded.labels == labels
    assert list(loaded.edges()) == list(g.edges())
    assert loaded.degree[3] == 0.0


def test_write_edge_list_formats_weights():
    g = Graph.from_edges(3, [(0, 1, 2.0), (1, 2, 0.5)])
    sink = io.StringIO()

    write_edge_list(g, sink)

    assert sink.getvalue().splitlines() == ["0", "1", "2", "0 1 2", "1 2 0.5"]


def test_duplicate_labels_rejected():
    with pytest.raises(DomainError):
        VertexLabels(("a", "b", "a"))


def test_unknown_label_lookup():
    labels = VertexLabels.default(3)

    assert labels.index_of("2") == 2
    assert "5" not in labels
    with pytest.raises(DomainError):
        labels.index_of("5")


def test_networkx_interop():
    g = Graph.from_networkx(nx.cycle_graph(5))

    assert g.n == 5
    assert g.num_edges == 5
    assert g.total_volume == 10.0

    back = g.to_networkx()
    assert back.number_of_edges() == 5
    assert back[0][1]["weight"] == 1.0


def test_networkx_directed_rejected():
    with pytest.raises(DomainError):
        Graph.from_networkx(nx.DiGraph([(0, 1)]))
