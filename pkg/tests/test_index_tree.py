"""Index tree construction, rendering, elongation and range covers."""

import pytest

from blockdna.codec import gc_fraction, hamming
from blockdna.exceptions import AddressError, ConfigurationError
from blockdna.index_tree import (SYNC_BASE, ElongatedPrimerCache, IndexTree, NodePath, TreeConfig,
                                 build_tree, edit_neighbors, elongate_primer,
                                 elongated_primers_for_range, leaf_index, prefix_cover,
                                 validate_index_set)

from conftest import FWD

# Node 0 is the root, nodes 1-4 its children in order.
ILLUSTRATION = [
    ("AC", "CT", "GA", "TG"),
    ("AC", "TG", "CA", "GT"),
    ("AG", "TC", "CT", "GA"),
    ("AC", "TG", "CA", "GT"),
    ("AC", "TG", "CA", "GT"),
]


def test_tree_config():
    config = TreeConfig(depth=5)
    assert config.leaf_count == 1024
    assert config.index_length == 10
    assert config.internal_nodes == 341
    with pytest.raises(ConfigurationError):
        TreeConfig(depth=0)


def test_build_is_deterministic_per_seed():
    assert build_tree(TreeConfig(5, 7)) == build_tree(TreeConfig(5, 7))
    assert build_tree(TreeConfig(5, 7)) != build_tree(TreeConfig(5, 8))


@pytest.mark.parametrize("seed", range(10))
def test_built_trees_pass_every_check(seed):
    report = validate_index_set(build_tree(TreeConfig(depth=5, seed=seed)))
    assert report.ok, report.failures
    assert report.min_leaf_distance >= 2
    assert report.distance_ratio >= 1.9


def test_leaf_indexes_are_distinct_and_invertible():
    tree = build_tree(TreeConfig(depth=5, seed=3))
    leaves = list(tree.leaf_indexes())
    assert len(leaves) == 1024
    assert len(set(leaves)) == 1024
    assert all(len(index) == 10 for index in leaves)
    for block_no, index in enumerate(leaves):
        assert leaf_index(tree, block_no) == index
        assert tree.block_for_index(index) == block_no
    assert tree.block_for_index("AAAAAAAAAA") is None
    assert tree.block_for_index("ACG") is None


def test_block_zero_is_the_leftmost_leaf():
    tree = build_tree(TreeConfig(depth=5, seed=4))
    expected = ""
    node = 0
    for _ in range(5):
        expected += tree.grams(node)[0]
        node = 4 * node + 1
    assert tree.leaf_index(0) == expected


def test_leaf_index_out_of_range():
    tree = build_tree(TreeConfig(depth=2))
    with pytest.raises(AddressError):
        tree.leaf_index(16)
    with pytest.raises(AddressError):
        tree.leaf_index(-1)


def test_sparse_rendering_of_dense_siblings():
    tree = IndexTree.from_assignments(2, ILLUSTRATION)
    first = tree.sparse_index_for("AA")
    second = tree.sparse_index_for("CA")
    assert (first, second) == ("ACAC", "CTAG")
    assert hamming(first, second) == 3
    with pytest.raises(AddressError):
        tree.sparse_index_for("AAA")


def test_hand_built_tree_with_same_class_spacer_fails_validation():
    grams = [list(g) for g in ILLUSTRATION]
    grams[0][0] = "AT"
    report = validate_index_set(IndexTree.from_assignments(2, grams))
    assert not report.ok
    assert report.checks["spacer_class"] is False
    assert report.checks["prefix_gc"] is False


def test_from_assignments_checks_shape():
    with pytest.raises(ConfigurationError):
        IndexTree.from_assignments(2, ILLUSTRATION[:4])
    with pytest.raises(ConfigurationError):
        IndexTree.from_assignments(1, [("AC", "TG", "CA", "GN")])


def test_elongated_primer_lengths():
    tree = build_tree(TreeConfig(depth=5, seed=9))
    assert elongate_primer(FWD, tree, 5, 0) == FWD + SYNC_BASE
    full = elongate_primer(FWD, tree, 5, 5)
    assert len(full) == 31
    assert full == FWD + SYNC_BASE + tree.leaf_index(5)
    partial = elongate_primer(FWD, tree, 5, 2)
    assert len(partial) == 25
    assert abs(gc_fraction(partial) * 25 - 12.5) <= 1
    with pytest.raises(ConfigurationError):
        elongate_primer(FWD, tree, 5, 6)


def test_prefix_cover():
    tree = build_tree(TreeConfig(depth=3, seed=2))
    assert prefix_cover(tree, 0, 63) == {NodePath()}
    assert prefix_cover(tree, 9, 9) == {NodePath.for_block(9, 3)}
    assert prefix_cover(tree, 0, 11) == {NodePath((0, 0)), NodePath((0, 1)), NodePath((0, 2))}
    cover = prefix_cover(tree, 3, 20)
    covered = sorted(b for path in cover
                     for b in range(path.leaf_range(3)[0], path.leaf_range(3)[1] + 1))
    assert covered == list(range(3, 21))
    with pytest.raises(AddressError):
        prefix_cover(tree, 5, 4)
    with pytest.raises(AddressError):
        prefix_cover(tree, 0, 64)


def test_prefix_cover_of_every_range_is_exact_and_minimal():
    tree = build_tree(TreeConfig(depth=3, seed=2))
    for first in range(64):
        for last in range(first, 64):
            cover = prefix_cover(tree, first, last)
            blocks = [b for path in cover
                      for b in range(path.leaf_range(3)[0], path.leaf_range(3)[1] + 1)]
            assert sorted(blocks) == list(range(first, last + 1))
            for path in cover:
                if path.depth:
                    parent = NodePath(path.levels[:-1])
                    lo, hi = parent.leaf_range(3)
                    assert not (first <= lo and hi <= last), (first, last, path)


def test_range_primers_select_exactly_the_range():
    tree = build_tree(TreeConfig(depth=3, seed=2))
    primers = elongated_primers_for_range(FWD, tree, 4, 11)
    assert [path for path, _ in primers] == [NodePath((0, 1)), NodePath((0, 2))]
    for path, primer in primers:
        lo, hi = path.leaf_range(3)
        for block_no in range(64):
            full = elongate_primer(FWD, tree, block_no, 3)
            assert full.startswith(primer) == (lo <= block_no <= hi)


def test_node_path():
    path = NodePath.for_block(27, 3)
    assert path.levels == (1, 2, 3)
    assert path.node_id() == 4 * (4 * (1 + 1) + 1 + 2) + 1 + 3
    assert path.leaf_range(3) == (27, 27)
    assert NodePath((1,)).leaf_range(3) == (16, 31)
    with pytest.raises(ValueError):
        NodePath((4,))


def test_edit_neighbors_include_siblings():
    tree = build_tree(TreeConfig(depth=3, seed=5))
    neighbors = edit_neighbors(tree, 0, radius=2)
    assert {1, 2, 3} <= set(neighbors)
    assert 0 not in neighbors


def test_primer_cache_keeps_frequent_blocks():
    tree = build_tree(TreeConfig(depth=3, seed=1))
    cache = ElongatedPrimerCache(FWD, tree, capacity=2)
    for block_no in (1, 1, 1, 2, 2, 3):
        cache.get(block_no)
    assert cache.kept() == [1, 2]
    assert 3 not in cache
    assert cache.syntheses == 3
    cache.get(3)
    cache.get(3)
    assert 3 in cache
    assert len(cache) == 2
    assert cache.get(1) == elongate_primer(FWD, tree, 1, 3)
