import pytest

from src.graph.core import Graph, VertexLabels
from src.tree.cluster_tree import ClusterTree, lca, levels, trivial_tree
from src.utils.errors import DomainError, TreeIntegrityError


def test_trivial_tree(k4):
    t = trivial_tree(k4)

    assert t.root == 4
    assert t.nodes[4].children == [0, 1, 2, 3]
    assert t.height == 1
    assert t.nodes[4].volume == 12.0
    assert t.nodes[4].cut == 0.0
    assert all(t.nodes[v].cut == 3.0 for v in range(4))
    assert levels(t) == [[4]]


def test_trivial_tree_needs_vertices():
    with pytest.raises(DomainError):
        ClusterTree.trivial(Graph.from_edges(0, []))


def test_nested_tree_caches(k4, balanced_k4):
    t = balanced_k4

    assert t.height == 2
    assert t.levels() == [[4], [5, 6]]
    assert t.nodes[5].volume == 6.0
    assert t.nodes[5].cut == 4.0
    assert t.leaves_under(6) == [2, 3]
    assert t.leaf_counts()[4] == 4
    t.check_caches(k4)


def test_lca(balanced_k4):
    assert balanced_k4.lca(0, 1) == 5
    assert lca(balanced_k4, 1, 3) == 4
    with pytest.raises(DomainError):
        balanced_k4.lca(2, 2)


def test_internal_nodes_sorted_by_depth(caterpillar_k4):
    assert caterpillar_k4.internal_nodes() == [4, 5, 6]
    assert caterpillar_k4.height == 3


def test_levels_need_uniform_depth(caterpillar_k4):
    with pytest.raises(DomainError):
        caterpillar_k4.levels()


def test_insert_node_keeps_caches_valid(k4):
    t = trivial_tree(k4)

    new_id = t.insert_node(4, [0, 1], cut=4.0)

    assert new_id == 5
    assert t.nodes[4].children == [5, 2, 3]
    assert t.nodes[5].volume == 6.0
    assert t.nodes[0].depth == 2
    t.check_caches(k4)


def test_insert_node_rejects_non_children(balanced_k4):
    with pytest.raises(DomainError):
        balanced_k4.insert_node(4, [0, 5], cut=0.0)
    with pytest.raises(DomainError):
        balanced_k4.insert_node(4, [], cut=0.0)


def test_contract(k4, balanced_k4):
    t = balanced_k4.copy()

    t.contract(5)

    assert t.nodes[4].children == [0, 1, 6]
    assert t.nodes[0].depth == 1
    assert 5 not in t.nodes
    t.check_caches(k4)
    # The original is untouched
    assert 5 in balanced_k4.nodes


def test_contract_rejects_root_and_leaves(balanced_k4):
    with pytest.raises(DomainError):
        balanced_k4.contract(4)
    with pytest.raises(DomainError):
        balanced_k4.contract(0)


def test_integrity_violations_detected(k4, balanced_k4):
    t = balanced_k4.copy()
    t.nodes[0].parent = 6
    with pytest.raises(TreeIntegrityError):
        t.recompute_caches(k4)

    t = balanced_k4.copy()
    t.nodes[6].children.append(0)
    with pytest.raises(TreeIntegrityError):
        t.recompute_caches(k4)


def test_stale_cache_detected(k4, balanced_k4):
    t = balanced_k4.copy()
    t.nodes[5].cut = 1.0

    with pytest.raises(TreeIntegrityError):
        t.check_caches(k4)


def test_from_nested_rejects_bad_input(k4):
    with pytest.raises(DomainError):
        ClusterTree.from_nested(k4, [[0, 1], [2]])
    with pytest.raises(DomainError):
        ClusterTree.from_nested(k4, [[0, 1], [1, 2, 3]])
    with pytest.raises(DomainError):
        ClusterTree.from_nested(k4, [[0, 1], [2, 3], []])


def test_nested_round_trip(random_graph, random_tree):
    g = random_graph(3, 9)
    t = random_tree(g, 7)

    again = ClusterTree.from_nested(g, t.to_nested())

    assert again.to_nested() == t.to_nested()
    assert again.leaf_counts()[again.root] == 9


def test_preorder_and_postorder(balanced_k4):
    assert list(balanced_k4.preorder()) == [4, 5, 0, 1, 6, 2, 3]
    assert balanced_k4.postorder()[-1] == 4
    assert set(balanced_k4.postorder(5)) == {5, 0, 1}


def test_newick_uses_labels():
    labels = VertexLabels(("a", "b", "c", "d", "x y"))
    g = Graph.from_edges(5, [(0, 1, 1.0), (2, 3, 1.0), (1, 2, 1.0), (3, 4, 1.0)], labels)
    t = ClusterTree.from_nested(g, [[0, 1], [2, 3, 4]])

    assert t.to_newick() == "((a,b),(c,d,'x y'));"
