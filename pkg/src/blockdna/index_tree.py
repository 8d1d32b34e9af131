"""Seeded sparse index tree.

Every block of a partition is a leaf of a 4-ary tree of depth ``D``. The edge
from a node to each of its children is a 2-gram: an edge letter followed by a
spacer letter of the opposite GC class. Edge letters are permuted per node by
a seeded generator; the two children reached through a weak (A/T) edge get the
strong spacers C and G, and the two children reached through a strong edge get
A and T, each pair in seeded-random order. Sibling 2-grams therefore differ in
both positions, every even prefix is GC balanced, and no index holds a run
longer than two.

Only ``(depth, seed)`` is ever stored. Nodes are numbered in level order, so
the children of node ``n`` are ``4n + 1`` .. ``4n + 4`` and leaf ``b`` (the
``b``-th leaf from the left) is the path given by the base-4 digits of ``b``.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import Levenshtein
import numpy as np

from .codec import BASES, STRONG, WEAK, gc_fraction, longest_homopolymer
from .exceptions import AddressError, ConfigurationError
from .types import DnaString

logger = logging.getLogger(__name__)

SYNC_BASE = "A"

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class TreeConfig:
    """Shape and seed of an index tree.

    Attributes:
        depth: Number of 4-ary levels; the tree has 4**depth leaves
        seed: 64-bit seed the per-node permutations are drawn from
    """
    depth: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ConfigurationError(f"Tree depth must be at least 1, got {self.depth}",
                                     field_name="depth")
        if not 0 <= self.seed <= _SEED_MASK:
            raise ConfigurationError("Tree seed must be a 64-bit unsigned integer",
                                     field_name="seed")

    @property
    def leaf_count(self) -> int:
        return 4 ** self.depth

    @property
    def index_length(self) -> int:
        return 2 * self.depth

    @property
    def internal_nodes(self) -> int:
        return (4 ** self.depth - 1) // 3


@dataclass(frozen=True, order=True)
class NodePath:
    """Child choices from the root down to a node.

    ``NodePath(())`` is the root. Paths order like the leaves they cover.
    """
    levels: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(not 0 <= c <= 3 for c in self.levels):
            raise ValueError(f"child choices must lie in 0..3, got {self.levels}")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def child(self, choice: int) -> "NodePath":
        return NodePath(self.levels + (choice,))

    def node_id(self) -> int:
        """Level-order id of the node."""
        node = 0
        for choice in self.levels:
            node = 4 * node + 1 + choice
        return node

    def leaf_range(self, tree_depth: int) -> Tuple[int, int]:
        """First and last block number below this node, inclusive."""
        span = 4 ** (tree_depth - self.depth)
        first = 0
        for choice in self.levels:
            first = first * 4 + choice
        first *= span
        return first, first + span - 1

    def render(self, tree: "IndexTree") -> DnaString:
        """The node's index, two bases per level; the root renders as ''."""
        return tree.render_path(self.levels)

    @classmethod
    def for_block(cls, block_no: int, depth: int) -> "NodePath":
        return cls(tuple((block_no >> (2 * (depth - 1 - level))) & 3 for level in range(depth)))


class IndexTree:
    """An immutable index tree.

    ``grams[n][c]`` is the 2-gram on the edge from node ``n`` to its child
    ``c``. Instances are normally built with :func:`build_tree`.
    """

    def __init__(self, config: TreeConfig, grams: Sequence[Sequence[str]]) -> None:
        if len(grams) != config.internal_nodes:
            raise ConfigurationError(
                f"A depth-{config.depth} tree has {config.internal_nodes} internal nodes, "
                f"got assignments for {len(grams)}")
        frozen = []
        for node, children in enumerate(grams):
            children = tuple(children)
            if len(children) != 4 or any(len(g) != 2 or set(g) - set(BASES) for g in children):
                raise ConfigurationError(f"Node {node} needs four 2-grams over ACGT, got {children}")
            frozen.append(children)
        self.config = config
        self._grams: Tuple[Tuple[str, ...], ...] = tuple(frozen)

    @classmethod
    def from_assignments(cls, depth: int, grams: Sequence[Sequence[str]],
                         seed: int = 0) -> "IndexTree":
        """Build a tree from explicit 2-grams given in node level order.

        Nothing beyond shape is checked, so hand-built trees can break the
        balance rules; :func:`validate_index_set` reports such trees.
        """
        return cls(TreeConfig(depth=depth, seed=seed), grams)

    @property
    def depth(self) -> int:
        return self.config.depth

    @property
    def leaf_count(self) -> int:
        return self.config.leaf_count

    def grams(self, node_id: int) -> Tuple[str, ...]:
        """The four child 2-grams of an internal node."""
        if not 0 <= node_id < len(self._grams):
            raise AddressError(f"Node {node_id} is not an internal node")
        return self._grams[node_id]

    def render_path(self, levels: Sequence[int]) -> DnaString:
        if len(levels) > self.depth:
            raise AddressError(f"Path of {len(levels)} levels is deeper than the tree")
        node = 0
        parts = []
        for choice in levels:
            parts.append(self._grams[node][choice])
            node = 4 * node + 1 + choice
        return "".join(parts)

    def leaf_index(self, block_no: int) -> DnaString:
        """Rendered index of the ``block_no``-th leaf (2 * depth bases).

        Raises:
            AddressError: If ``block_no`` is outside the tree
        """
        if not 0 <= block_no < self.leaf_count:
            raise AddressError(f"Block {block_no} is outside 0..{self.leaf_count - 1}")
        return self.render_path(NodePath.for_block(block_no, self.depth).levels)

    def leaf_indexes(self) -> Iterator[DnaString]:
        """All leaf indexes in block order."""
        level: List[str] = [""]
        first_node = 0
        for depth in range(self.depth):
            level = [prefix + gram
                     for offset, prefix in enumerate(level)
                     for gram in self._grams[first_node + offset]]
            first_node += 4 ** depth
        return iter(level)

    def sparse_index_for(self, letters: str) -> DnaString:
        """Render a dense path written as edge letters, e.g. ``"CA"`` -> ``"CTAG"``."""
        if len(letters) > self.depth:
            raise AddressError(f"Path {letters!r} is deeper than the tree")
        node = 0
        parts = []
        for letter in letters:
            children = self._grams[node]
            choice = next((c for c, g in enumerate(children) if g[0] == letter), None)
            if choice is None:
                raise AddressError(f"No edge labelled {letter!r} below node {node}")
            parts.append(children[choice])
            node = 4 * node + 1 + choice
        return "".join(parts)

    def block_for_index(self, index: DnaString) -> Optional[int]:
        """Block number whose leaf index is ``index``, or None."""
        if len(index) != self.config.index_length:
            return None
        node = 0
        block_no = 0
        for level in range(self.depth):
            gram = index[2 * level:2 * level + 2]
            try:
                choice = self._grams[node].index(gram)
            except ValueError:
                return None
            block_no = block_no * 4 + choice
            node = 4 * node + 1 + choice
        return block_no

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexTree):
            return NotImplemented
        return self.config.depth == other.config.depth and self._grams == other._grams

    def __hash__(self) -> int:
        return hash((self.config.depth, self._grams))

    def __repr__(self) -> str:
        return f"IndexTree(depth={self.depth}, seed={self.config.seed:#x})"


def build_tree(config: TreeConfig) -> IndexTree:
    """Derive the tree for ``config`` from its seed.

    Nodes are visited in level order and each draws, from one Philox stream,
    a permutation of the edge letters and an order for each spacer class.
    """
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    strong = sorted(STRONG)
    weak = sorted(WEAK)
    grams = []
    for _ in range(config.internal_nodes):
        edges = [BASES[i] for i in rng.permutation(4)]
        strong_spacers = iter([strong[i] for i in rng.permutation(2)])
        weak_spacers = iter([weak[i] for i in rng.permutation(2)])
        grams.append(tuple(
            edge + (next(strong_spacers) if edge in WEAK else next(weak_spacers))
            for edge in edges))
    logger.debug("Built index tree of depth %d from seed %#x", config.depth, config.seed)
    return IndexTree(config, grams)


def leaf_index(tree: IndexTree, block_no: int) -> DnaString:
    """Module-level form of :meth:`IndexTree.leaf_index`."""
    return tree.leaf_index(block_no)


def elongate_primer(main_primer: DnaString, tree: IndexTree, block_no: int, levels: int) -> DnaString:
    """Main primer, sync base and the first ``levels`` 2-grams of the block's index.

    Raises:
        ConfigurationError: If ``levels`` is outside 0..depth
        AddressError: If the block is outside the tree
    """
    if not 0 <= levels <= tree.depth:
        raise ConfigurationError(f"Elongation must be 0..{tree.depth} levels, got {levels}",
                                 field_name="levels")
    return main_primer + SYNC_BASE + tree.leaf_index(block_no)[:2 * levels]


def prefix_cover(tree: IndexTree, first_block: int, last_block: int) -> Set[NodePath]:
    """Minimal set of nodes whose leaves are exactly ``first_block..last_block``.

    Raises:
        AddressError: If the range is empty or leaves the tree
    """
    if not 0 <= first_block <= last_block < tree.leaf_count:
        raise AddressError(
            f"Invalid block range {first_block}..{last_block} for {tree.leaf_count} leaves")
    cover: Set[NodePath] = set()

    def visit(path: NodePath) -> None:
        lo, hi = path.leaf_range(tree.depth)
        if hi < first_block or lo > last_block:
            return
        if first_block <= lo and hi <= last_block:
            cover.add(path)
            return
        for choice in range(4):
            visit(path.child(choice))

    visit(NodePath())
    return cover


def elongated_primers_for_range(main_primer: DnaString, tree: IndexTree,
                                first_block: int, last_block: int) -> List[Tuple[NodePath, DnaString]]:
    """One partially elongated primer per node of the range's prefix cover."""
    return [(path, main_primer + SYNC_BASE + path.render(tree))
            for path in sorted(prefix_cover(tree, first_block, last_block))]


def edit_neighbors(tree: IndexTree, block_no: int, radius: int) -> List[int]:
    """Other blocks whose sync base and index lie within ``radius`` edits.

    These are the blocks an elongated primer for ``block_no`` is most likely
    to misprime on.
    """
    target = SYNC_BASE + tree.leaf_index(block_no)
    neighbors = []
    for other, index in enumerate(tree.leaf_indexes()):
        if other != block_no and Levenshtein.distance(
                target, SYNC_BASE + index, score_cutoff=radius) <= radius:
            neighbors.append(other)
    return neighbors


@dataclass
class ValidationReport:
    """Result of :func:`validate_index_set`.

    Attributes:
        checks: Check name -> passed
        failures: Human readable descriptions of the first failures found
        min_leaf_distance: Smallest Hamming distance between two leaf indexes
        average_distance: Mean pairwise Hamming distance of the leaf indexes
        dense_average_distance: The same mean for the plain base-4 enumeration
            of the same number of leaves
    """
    checks: Dict[str, bool] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    min_leaf_distance: int = 0
    average_distance: float = 0.0
    dense_average_distance: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def distance_ratio(self) -> float:
        if not self.dense_average_distance:
            return 0.0
        return self.average_distance / self.dense_average_distance

    def fail(self, check: str, message: str) -> None:
        self.checks[check] = False
        if len(self.failures) < 20:
            self.failures.append(message)


def _pairwise_hamming(strings: Sequence[str]) -> Tuple[int, float]:
    """Minimum and mean Hamming distance over all distinct pairs."""
    if len(strings) < 2:
        return 0, 0.0
    codes = np.frombuffer("".join(strings).encode("ascii"), dtype=np.uint8)
    codes = codes.reshape(len(strings), -1)
    distances = np.zeros((len(strings), len(strings)), dtype=np.int32)
    for position in range(codes.shape[1]):
        column = codes[:, position]
        distances += column[:, None] != column[None, :]
    upper = distances[np.triu_indices(len(strings), k=1)]
    return int(upper.min()), float(upper.mean())


def validate_index_set(tree: IndexTree, max_pairwise_leaves: int = 4096) -> ValidationReport:
    """Check the balance and distance properties of a tree.

    Pairwise statistics are exact up to ``max_pairwise_leaves`` leaves and
    computed on a seeded sample above that.
    """
    report = ValidationReport(checks={
        "spacer_class": True,
        "sibling_distance": True,
        "homopolymer": True,
        "prefix_gc": True,
        "leaf_distance": True,
    })

    for node in range(tree.config.internal_nodes):
        children = tree.grams(node)
        for gram in children:
            if (gram[0] in STRONG) == (gram[1] in STRONG):
                report.fail("spacer_class", f"node {node}: 2-gram {gram} has one GC class")
        for a in range(4):
            for b in range(a + 1, 4):
                x, y = children[a], children[b]
                if (x[0] != y[0]) + (x[1] != y[1]) != 2:
                    report.fail("sibling_distance", f"node {node}: siblings {x} and {y}")

    leaves = list(tree.leaf_indexes())
    for block_no, index in enumerate(leaves):
        if longest_homopolymer(SYNC_BASE + index) > 2:
            report.fail("homopolymer", f"block {block_no}: {SYNC_BASE + index}")
        for end in range(2, len(index) + 1, 2):
            if gc_fraction(index[:end]) != 0.5:
                report.fail("prefix_gc", f"block {block_no}: prefix {index[:end]}")
                break

    sample = leaves
    dense = [NodePath.for_block(b, tree.depth) for b in range(len(leaves))]
    if len(leaves) > max_pairwise_leaves:
        rng = np.random.Generator(np.random.Philox(key=tree.config.seed))
        chosen = np.sort(rng.choice(len(leaves), size=max_pairwise_leaves, replace=False))
        sample = [leaves[i] for i in chosen]
        dense = [dense[i] for i in chosen]
    report.min_leaf_distance, report.average_distance = _pairwise_hamming(sample)
    _, report.dense_average_distance = _pairwise_hamming(
        ["".join(BASES[c] for c in path.levels) for path in dense])
    if report.min_leaf_distance < 2:
        report.fail("leaf_distance", f"two leaf indexes are {report.min_leaf_distance} apart")
    return report


class ElongatedPrimerCache:
    """On-demand elongated primers for one partition.

    Primers are synthesized when first requested; the cache keeps at most
    ``capacity`` of them, preferring the ones requested most often.
    """

    def __init__(self, main_primer: DnaString, tree: IndexTree, capacity: int = 32,
                 levels: Optional[int] = None) -> None:
        if capacity < 1:
            raise ConfigurationError("Primer cache capacity must be positive", field_name="capacity")
        self.main_primer = main_primer
        self.tree = tree
        self.capacity = capacity
        self.levels = tree.depth if levels is None else levels
        self.requests: Counter = Counter()
        self._cache: Dict[int, DnaString] = {}
        self.syntheses = 0

    def get(self, block_no: int) -> DnaString:
        """Primer for ``block_no``, synthesizing it if it is not kept."""
        self.requests[block_no] += 1
        primer = self._cache.get(block_no)
        if primer is not None:
            return primer
        primer = elongate_primer(self.main_primer, self.tree, block_no, self.levels)
        self.syntheses += 1
        if len(self._cache) < self.capacity:
            self._cache[block_no] = primer
        else:
            coldest = min(self._cache, key=lambda b: (self.requests[b], b))
            if self.requests[block_no] > self.requests[coldest]:
                del self._cache[coldest]
                self._cache[block_no] = primer
                logger.debug("Primer for block %d replaced block %d in cache", block_no, coldest)
        return primer

    def __contains__(self, block_no: int) -> bool:
        return block_no in self._cache

    def __len__(self) -> int:
        return len(self._cache)

    def kept(self) -> List[int]:
        """Cached block numbers, most requested first."""
        return sorted(self._cache, key=lambda b: (-self.requests[b], b))
