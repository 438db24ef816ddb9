from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set

import structlog

from kgcore.hypergraph import Hypergraph
from kgcore.models import Position, Variant
from kgcore.peeling import CorenessResult, ShellDecomposition, coreness_tables

LOGGER = structlog.get_logger()


@dataclass
class AuxNode:
    """Depth-keyed node sets hanging off a leaf position.

    depths[d] holds nodes common to the d + 1 leaves (k-d, g), (k-d+1, g-1), ..., (k, g-d)
    of the exact-coreness tree.
    """

    position: Position
    depths: Dict[int, Set[int]] = field(default_factory=dict)

    def entries(self) -> int:
        return sum(len(s) for s in self.depths.values())

    def nonempty_depths(self) -> List[int]:
        return sorted(d for d, s in self.depths.items() if s)

    def __bool__(self) -> bool:
        return any(self.depths.values())


class LeafNode:
    __slots__ = ("k", "g", "value", "next", "jump", "aux")

    def __init__(self, k: int, g: int, value: Optional[Set[int]] = None) -> None:
        self.k = k
        self.g = g
        self.value: Set[int] = set(value) if value else set()
        self.next: Optional["LeafNode"] = None
        self.jump: Optional["LeafNode"] = None
        self.aux: Optional[AuxNode] = None

    @property
    def position(self) -> Position:
        return self.k, self.g

    def __repr__(self) -> str:
        return f"LeafNode(k={self.k}, g={self.g}, size={len(self.value)})"


@dataclass
class Branch:
    g: int
    leaves: List[LeafNode] = field(default_factory=list)

    @property
    def k_max(self) -> int:
        return len(self.leaves)

    def leaf(self, k: int) -> Optional[LeafNode]:
        if 1 <= k <= len(self.leaves):
            return self.leaves[k - 1]
        return None

    def extend_to(self, k: int) -> None:
        while len(self.leaves) < k:
            self.leaves.append(LeafNode(len(self.leaves) + 1, self.g))


@dataclass
class CoreSizeTable:
    """sizes[g][k - 1] = |(k,g)-core| for k = 1..k*_g."""

    sizes: Dict[int, List[int]] = field(default_factory=dict)

    def get(self, k: int, g: int) -> int:
        row = self.sizes.get(g)
        if not row or k < 1 or k > len(row):
            return 0
        return row[k - 1]


@dataclass
class IndexTree:
    variant: Variant
    branches: Dict[int, Branch] = field(default_factory=dict)
    core_sizes: CoreSizeTable = field(default_factory=CoreSizeTable)
    labels: List[str] = field(default_factory=list)
    fingerprint: str = ""

    @property
    def g_star(self) -> int:
        return len(self.branches)

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    def branch(self, g: int) -> Optional[Branch]:
        return self.branches.get(g)

    def leaf(self, k: int, g: int) -> Optional[LeafNode]:
        branch = self.branches.get(g)
        return branch.leaf(k) if branch else None

    def k_max(self, g: int) -> int:
        branch = self.branches.get(g)
        return branch.k_max if branch else 0

    def leaves(self) -> Iterator[LeafNode]:
        for g in sorted(self.branches):
            yield from self.branches[g].leaves

    def positions(self) -> Iterator[Position]:
        for leaf in self.leaves():
            yield leaf.position

    def total_entries(self) -> int:
        total = 0
        for leaf in self.leaves():
            total += len(leaf.value)
            if leaf.aux:
                total += leaf.aux.entries()
        return total

    def aux_node(self, k: int, g: int, create: bool = False) -> Optional[AuxNode]:
        leaf = self.leaf(k, g)
        if leaf is None:
            return None
        if leaf.aux is None and create:
            leaf.aux = AuxNode(position=(k, g))
        return leaf.aux

    def relink(self) -> None:
        """Rewire next/jump links from leaf positions for this tree's variant."""
        with_next = self.variant != Variant.NAIVE
        with_jump = self.variant in (Variant.LSE_HV, Variant.LSE_HVD)
        for g, branch in self.branches.items():
            for leaf in branch.leaves:
                leaf.next = branch.leaf(leaf.k + 1) if with_next else None
                leaf.jump = self.leaf(leaf.k, g + 1) if with_jump else None


def build_core_size_table(decompositions: Dict[int, ShellDecomposition]) -> CoreSizeTable:
    return CoreSizeTable(sizes={g: d.core_sizes() for g, d in sorted(decompositions.items())})


def _empty_tree(graph: Hypergraph, variant: Variant, coreness: CorenessResult) -> IndexTree:
    return IndexTree(
        variant=variant,
        core_sizes=build_core_size_table(coreness.decompositions),
        labels=list(graph.labels),
        fingerprint=graph.fingerprint,
    )


def _coreness(graph: Hypergraph, threads: int, coreness: Optional[CorenessResult]) -> CorenessResult:
    return coreness if coreness is not None else coreness_tables(graph, threads=threads)


def build_naive(
    graph: Hypergraph, threads: int = 1, coreness: Optional[CorenessResult] = None
) -> IndexTree:
    coreness = _coreness(graph, threads, coreness)
    tree = _empty_tree(graph, Variant.NAIVE, coreness)
    for g, decomposition in sorted(coreness.decompositions.items()):
        branch = Branch(g=g)
        core: Set[int] = set()
        values: List[Set[int]] = []
        for shell in reversed(decomposition.shells):
            core |= shell
            values.append(set(core))
        for k, value in enumerate(reversed(values), start=1):
            branch.leaves.append(LeafNode(k, g, value))
        tree.branches[g] = branch
    LOGGER.info("index_built", variant=tree.variant.value, g_star=tree.g_star, entries=tree.total_entries())
    return tree


def _shell_tree(graph: Hypergraph, variant: Variant, coreness: CorenessResult) -> IndexTree:
    tree = _empty_tree(graph, variant, coreness)
    for g, decomposition in sorted(coreness.decompositions.items()):
        branch = Branch(g=g)
        for k, shell in enumerate(decomposition.shells, start=1):
            branch.leaves.append(LeafNode(k, g, shell))
        tree.branches[g] = branch
    return tree


def build_lse_h(
    graph: Hypergraph, threads: int = 1, coreness: Optional[CorenessResult] = None
) -> IndexTree:
    tree = _shell_tree(graph, Variant.LSE_H, _coreness(graph, threads, coreness))
    tree.relink()
    LOGGER.info("index_built", variant=tree.variant.value, g_star=tree.g_star, entries=tree.total_entries())
    return tree


def _difference_vertically(tree: IndexTree) -> None:
    """leaf(k,g) keeps only nodes absent from the shell at (k, g+1)."""
    originals = {pos: frozenset(tree.leaf(*pos).value) for pos in tree.positions()}
    for (k, g), value in originals.items():
        above = originals.get((k, g + 1), frozenset())
        tree.leaf(k, g).value = set(value - above)


def build_lse_hv(
    graph: Hypergraph, threads: int = 1, coreness: Optional[CorenessResult] = None
) -> IndexTree:
    tree = _shell_tree(graph, Variant.LSE_HV, _coreness(graph, threads, coreness))
    _difference_vertically(tree)
    tree.relink()
    LOGGER.info("index_built", variant=tree.variant.value, g_star=tree.g_star, entries=tree.total_entries())
    return tree


def _ensure_leaf(tree: IndexTree, k: int, g: int) -> LeafNode:
    branch = tree.branches[g]
    if branch.k_max < k:
        branch.extend_to(k)
        LOGGER.debug("intersection_leaf_created", k=k, g=g)
    return branch.leaf(k)


def _merge_diagonal(tree: IndexTree, k: int, g: int) -> int:
    """Compress the diagonal pair (k+1, g) / (k, g+1) into aux(k+1, g+1).

    Returns the number of node entries saved.
    """
    lower = tree.leaf(k + 1, g)
    upper = tree.leaf(k, g + 1)
    if lower is None or upper is None:
        return 0

    saved = 0
    common = lower.value & upper.value
    if common:
        target = _ensure_leaf(tree, k + 1, g + 1)
        if target.aux is None:
            target.aux = AuxNode(position=(k + 1, g + 1))
        target.aux.depths.setdefault(1, set()).update(common)
        lower.value -= common
        upper.value -= common
        saved += len(common)

    if lower.aux and upper.aux:
        for d in sorted(set(lower.aux.depths) & set(upper.aux.depths)):
            shared = lower.aux.depths[d] & upper.aux.depths[d]
            if not shared:
                continue
            target = _ensure_leaf(tree, k + 1, g + 1)
            if target.aux is None:
                target.aux = AuxNode(position=(k + 1, g + 1))
            target.aux.depths.setdefault(d + 1, set()).update(shared)
            lower.aux.depths[d] -= shared
            upper.aux.depths[d] -= shared
            saved += len(shared)
    return saved


def _prune_aux(tree: IndexTree) -> None:
    for leaf in tree.leaves():
        if leaf.aux is None:
            continue
        leaf.aux.depths = {d: s for d, s in leaf.aux.depths.items() if s}
        if not leaf.aux.depths:
            leaf.aux = None


def _sweep_diagonals(tree: IndexTree) -> int:
    """Visit base positions (k, g) by increasing k + g, ties by increasing g."""
    saved = 0
    if not tree.branches:
        return saved
    limit = max(b.k_max for b in tree.branches.values()) + tree.g_star
    for s in range(2, limit + 1):
        for g in range(1, min(s - 1, tree.g_star) + 1):
            k = s - g
            if tree.leaf(k, g) is None:
                continue
            saved += _merge_diagonal(tree, k, g)
    return saved


def build_lse_hvd(
    graph: Hypergraph, threads: int = 1, coreness: Optional[CorenessResult] = None
) -> IndexTree:
    tree = _shell_tree(graph, Variant.LSE_HVD, _coreness(graph, threads, coreness))
    _difference_vertically(tree)
    saved = _sweep_diagonals(tree)
    _prune_aux(tree)
    tree.relink()
    LOGGER.info(
        "index_built",
        variant=tree.variant.value,
        g_star=tree.g_star,
        entries=tree.total_entries(),
        diagonal_saved=saved,
    )
    return tree


BUILDERS = {
    Variant.NAIVE: build_naive,
    Variant.LSE_H: build_lse_h,
    Variant.LSE_HV: build_lse_hv,
    Variant.LSE_HVD: build_lse_hvd,
}


def build_index(
    graph: Hypergraph,
    variant: Variant,
    threads: int = 1,
    coreness: Optional[CorenessResult] = None,
) -> IndexTree:
    return BUILDERS[variant](graph, threads=threads, coreness=coreness)
