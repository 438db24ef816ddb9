from bisect import bisect_left, bisect_right
from typing import Iterator, List, Set, Tuple

import structlog

from kgcore.hypergraph import Hypergraph
from kgcore.index import IndexTree, LeafNode
from kgcore.models import Query, SizeQuery, Variant
from kgcore.peeling import kg_core

LOGGER = structlog.get_logger()

SizedPosition = Tuple[Tuple[int, int], int]


def _start(tree: IndexTree, variant: Variant, k: int, g: int) -> LeafNode:
    if tree.variant != variant:
        raise ValueError(f"expected a {variant.value} tree, got {tree.variant.value}")
    Query(k=k, g=g)
    return tree.leaf(k, g)


def _along_next(leaf: LeafNode) -> Iterator[LeafNode]:
    while leaf is not None:
        yield leaf
        leaf = leaf.next


def _quadrant(leaf: LeafNode) -> Iterator[LeafNode]:
    """Every leaf reachable by jump links, then next links, from `leaf`."""
    starter = leaf
    while starter is not None:
        yield from _along_next(starter)
        starter = starter.jump


def query_naive(tree: IndexTree, k: int, g: int) -> List[int]:
    leaf = _start(tree, Variant.NAIVE, k, g)
    return sorted(leaf.value) if leaf else []


def query_lse_h(tree: IndexTree, k: int, g: int) -> List[int]:
    leaf = _start(tree, Variant.LSE_H, k, g)
    core: Set[int] = set()
    for node in _along_next(leaf):
        core.update(node.value)
    return sorted(core)


def query_lse_hv(tree: IndexTree, k: int, g: int) -> List[int]:
    leaf = _start(tree, Variant.LSE_HV, k, g)
    core: Set[int] = set()
    if leaf is not None:
        for node in _quadrant(leaf):
            core.update(node.value)
    return sorted(core)


def query_lse_hvd(tree: IndexTree, k: int, g: int) -> List[int]:
    """Aux depth d at (k', g') counts only when d <= (k' - k) + (g' - g).

    That bound skips the starting position's aux node entirely and admits
    depth 1 after a single link.
    """
    leaf = _start(tree, Variant.LSE_HVD, k, g)
    core: Set[int] = set()
    if leaf is None:
        return []
    for node in _quadrant(leaf):
        core.update(node.value)
        if node.aux is None:
            continue
        offset = (node.k - k) + (node.g - g)
        for d, members in node.aux.depths.items():
            if d <= offset:
                core.update(members)
    return sorted(core)


QUERIES = {
    Variant.NAIVE: query_naive,
    Variant.LSE_H: query_lse_h,
    Variant.LSE_HV: query_lse_hv,
    Variant.LSE_HVD: query_lse_hvd,
}


def query(tree: IndexTree, k: int, g: int) -> List[int]:
    return QUERIES[tree.variant](tree, k, g)


def query_labels(tree: IndexTree, k: int, g: int) -> List[str]:
    return [tree.labels[v] for v in query(tree, k, g)]


def core_size(tree: IndexTree, k: int, g: int) -> int:
    return tree.core_sizes.get(k, g)


def size_bounded_query(tree: IndexTree, lb: int, ub: int) -> List[SizedPosition]:
    """All (k, g) whose nonempty core size lies in [lb, ub], ordered by (g, k)."""
    SizeQuery(lb=lb, ub=ub)
    found: List[SizedPosition] = []
    for g in sorted(tree.core_sizes.sizes):
        sizes = tree.core_sizes.sizes[g]
        # sizes is non-increasing in k; search on the negated sequence
        first = bisect_left(sizes, -ub, key=lambda s: -s)
        last = bisect_right(sizes, -lb, key=lambda s: -s)
        for i in range(first, last):
            found.append(((i + 1, g), sizes[i]))
    LOGGER.debug("size_query_answered", lb=lb, ub=ub, pairs=len(found))
    return found


def size_bounded_query_peeling(graph: Hypergraph, lb: int, ub: int) -> List[SizedPosition]:
    """Same answer as size_bounded_query, computed by repeated peeling."""
    SizeQuery(lb=lb, ub=ub)
    found: List[SizedPosition] = []
    g = 1
    while True:
        core = kg_core(graph, 1, g).members
        if not core:
            break
        k = 1
        while core and len(core) >= lb:
            if len(core) <= ub:
                found.append(((k, g), len(core)))
            k += 1
            core = kg_core(graph, k, g, alive=core).members
        g += 1
    return found
