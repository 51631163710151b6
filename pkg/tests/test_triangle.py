import math

import pytest

from src.config.settings import LocalEntropyVariant, StretchOrder
from src.costs.entropy import structural_entropy
from src.graph.core import Graph
from src.hcse.triangle import (
    StagedSubtree,
    build_triangle,
    compress,
    compress_penalty,
    local_entropy,
    merge_gain,
    stretch,
)
from src.tree.cluster_tree import ClusterTree, trivial_tree
from src.utils.errors import DomainError


def test_build_triangle(k4):
    tri = build_triangle(trivial_tree(k4), k4, 4)

    assert tri.apex == 4
    assert tri.leaves == (0, 1, 2, 3)
    assert tri.apex_volume == 12.0
    assert tri.local.weight(0, 3) == 1.0


def test_triangle_needs_internal_apex(k4):
    with pytest.raises(DomainError):
        build_triangle(trivial_tree(k4), k4, 0)


def test_merge_gain_on_k4(k4):
    tri = build_triangle(trivial_tree(k4), k4, 4)

    assert merge_gain(tri, 0, 1) == pytest.approx(1.0 / 6.0, abs=1e-12)
    with pytest.raises(DomainError):
        merge_gain(tri, 2, 2)


def test_merge_gain_matches_entropy_difference(random_graph):
    for seed in range(20):
        g = random_graph(seed, 8, density=0.6)
        t = trivial_tree(g)
        tri = build_triangle(t, g, t.root)
        for a, b, w in list(g.edges())[:5]:
            merged = t.copy()
            merged.insert_node(t.root, [a, b], cut=t.nodes[a].cut + t.nodes[b].cut - 2 * w)
            merged.check_caches(g)

            expected = structural_entropy(g, t) - structural_entropy(g, merged)
            assert merge_gain(tri, a, b) == pytest.approx(expected, abs=1e-9)
            assert merge_gain(tri, a, b) >= 0.0


def test_stretch_and_compress_k4(k4):
    tri = build_triangle(trivial_tree(k4), k4, 4)

    staged = stretch(tri)
    assert staged.height() == 2
    assert len(staged.top) == 2

    compress(staged)
    assert staged.penalties == []
    assert staged.groups() == [([0, 1], 4.0), ([2, 3], 4.0)]
    assert staged.flat_entropy() == pytest.approx(2.0, abs=1e-12)
    assert staged.local_entropy() == pytest.approx(5.0 / 3.0, abs=1e-12)
    assert staged.reduction() == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_two_triangles_split_along_bridge(two_triangles):
    tri = build_triangle(trivial_tree(two_triangles), two_triangles, 6)

    staged = StagedSubtree.from_triangle(tri).stretch()
    # Four merges leave two clusters under the apex
    assert len(staged.nodes) == 6 + 4
    assert staged.height() == 3

    staged.compress()
    expected_penalty = 2.0 / 14.0 * math.log2(7.0 / 4.0)
    assert staged.penalties == pytest.approx([expected_penalty, expected_penalty], abs=1e-12)
    assert staged.groups() == [([0, 1, 2], 1.0), ([3, 4, 5], 1.0)]
    assert staged.height() == 2
    assert staged.reduction() > 0.0


def test_k5_stages_into_two_and_three(k5):
    tri = build_triangle(trivial_tree(k5), k5, 5)

    staged = stretch(tri).compress()

    # (0, 1) and (2, 3) pair up first, then vertex 4 joins the lower-id pair
    assert [members for members, _ in staged.groups()] == [[2, 3], [0, 1, 4]]
    assert staged.penalties == pytest.approx([2.0 / 20.0 * math.log2(12.0 / 8.0)], abs=1e-12)
    assert staged.reduction() > 0.0


def test_k5_insertion_order_grows_one_cluster(k5):
    tri = build_triangle(trivial_tree(k5), k5, 5)

    staged = stretch(tri, order=StretchOrder.INSERTION).compress()

    assert [members for members, _ in staged.groups()] == [[0, 1, 2], [3, 4]]
    assert staged.reduction() > 0.0


def test_merge_priority_matches_pooled_entropy_difference(k5):
    tri = build_triangle(trivial_tree(k5), k5, 5)
    staged = StagedSubtree.from_triangle(tri)
    gamma = staged.merge(0, 1)

    nested = structural_entropy(k5, ClusterTree.from_nested(k5, [[0, 1], 2, 3, 4]))
    pooled = structural_entropy(k5, ClusterTree.from_nested(k5, [[0, 1, 2], 3, 4]))
    assert staged.merge_priority(gamma, 2) == pytest.approx(nested - pooled, abs=1e-12)
    assert staged.merge_priority(gamma, 2) < staged.merge_priority(2, 3)
    assert staged.merge_priority(2, 3) == pytest.approx(staged.merge_gain(2, 3), abs=1e-12)

    insertion = StagedSubtree.from_triangle(tri, order=StretchOrder.INSERTION)
    gamma = insertion.merge(0, 1)
    assert insertion.merge_priority(gamma, 2) == insertion.merge_gain(gamma, 2)


def test_unlinked_siblings_still_merge():
    g = Graph.from_edges(4, [(0, 1, 1.0)])
    tri = build_triangle(trivial_tree(g), g, 4)

    staged = stretch(tri)

    assert len(staged.top) == 2
    assert staged.merge_gain(*sorted(staged.top)) == 0.0


def test_compress_penalty_on_caterpillar_root_edge(k4, caterpillar_k4):
    penalty = compress_penalty(caterpillar_k4, k4, 5)

    assert penalty == pytest.approx(4.0 / 12.0 * math.log2(12.0 / 9.0), abs=1e-12)
    assert penalty == pytest.approx(0.13834, abs=1e-5)


def test_compress_penalty_matches_entropy_difference(random_graph, random_tree):
    for seed in range(30):
        g = random_graph(seed, 10)
        t = random_tree(g, seed)
        for v in t.internal_nodes():
            if v == t.root:
                continue
            contracted = t.copy()
            contracted.contract(v)

            expected = structural_entropy(g, contracted) - structural_entropy(g, t)
            assert compress_penalty(t, g, v) == pytest.approx(expected, abs=1e-9)
            assert compress_penalty(t, g, v) >= 0.0


def test_compress_penalty_domain(k4, balanced_k4):
    with pytest.raises(DomainError):
        compress_penalty(balanced_k4, k4, 4)
    with pytest.raises(DomainError):
        compress_penalty(balanced_k4, k4, 0)


def test_equal_volume_contraction_is_free(path4):
    # Node {0, 1, 2, 3} below the root has the root's volume
    t = ClusterTree.from_nested(path4, [[[0, 1], [2, 3]]])

    assert compress_penalty(t, path4, 5) == 0.0


def test_local_entropy_variants(k4, balanced_k4):
    assert local_entropy(trivial_tree(k4), k4, 4) == pytest.approx(2.0)
    assert local_entropy(balanced_k4, k4, 4) == pytest.approx(2.0 / 3.0)
    assert local_entropy(balanced_k4, k4, 5) == pytest.approx(0.5)
    assert local_entropy(balanced_k4, k4, 4, LocalEntropyVariant.PARENT_CUT) == 0.0
    assert local_entropy(balanced_k4, k4, 5, LocalEntropyVariant.PARENT_CUT) == pytest.approx(2 * 4.0 / 12.0)


def test_staged_penalties_never_negative(random_graph, random_tree):
    for seed in range(30):
        g = random_graph(seed, 12, density=0.35)
        t = random_tree(g, seed)
        for u in t.internal_nodes():
            staged = stretch(build_triangle(t, g, u)).compress()
            assert all(p >= 0.0 for p in staged.penalties)
            assert staged.height() <= 2
