from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

import structlog

from kgcore.hypergraph import Hypergraph

LOGGER = structlog.get_logger()


@dataclass(frozen=True)
class CoreResult:
    members: FrozenSet[int]
    k: int
    g: int

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ShellDecomposition:
    """shells[k - 1] holds the nodes whose g-coreness is exactly k."""

    g: int
    shells: List[FrozenSet[int]] = field(default_factory=list)

    @property
    def k_star(self) -> int:
        return len(self.shells)

    def shell(self, k: int) -> FrozenSet[int]:
        if 1 <= k <= len(self.shells):
            return self.shells[k - 1]
        return frozenset()

    def core(self, k: int) -> FrozenSet[int]:
        if k < 1:
            k = 1
        out: Set[int] = set()
        for s in self.shells[k - 1 :]:
            out.update(s)
        return frozenset(out)

    def core_sizes(self) -> List[int]:
        sizes: List[int] = []
        running = 0
        for s in reversed(self.shells):
            running += len(s)
            sizes.append(running)
        sizes.reverse()
        return sizes

    def __bool__(self) -> bool:
        return bool(self.shells)


@dataclass
class CorenessTable:
    """c_g(v) for g = 1..g*; nodes outside the (1,1)-core read as 0."""

    g_star: int
    values: Dict[int, List[int]] = field(default_factory=dict)

    def g_coreness(self, v: int, g: int) -> int:
        row = self.values.get(v)
        if not row or g < 1 or g > len(row):
            return 0
        return row[g - 1]

    def k_coreness(self, v: int, k: int) -> int:
        best = 0
        for g, c in enumerate(self.values.get(v, []), start=1):
            if c >= k:
                best = g
            else:
                break
        return best


@dataclass
class CorenessResult:
    decompositions: Dict[int, ShellDecomposition]
    table: CorenessTable
    g_star: int
    k_star: int
    k_star_by_g: Dict[int, int]


def _qualified_neighbours(graph: Hypergraph, g: int, alive: Iterable[int]) -> Dict[int, List[int]]:
    alive_set = alive if isinstance(alive, (set, frozenset)) else set(alive)
    return {
        v: [w for w, c in graph.cooccurrence_of(v).items() if c >= g and w in alive_set]
        for v in alive_set
    }


def _peel(
    neighbours: Dict[int, List[int]],
    degree: Dict[int, int],
    alive: Set[int],
    k: int,
) -> List[int]:
    """Remove every node of `alive` whose live qualified degree drops below k.

    `degree` and `alive` are updated in place; removed nodes are returned in
    FIFO removal order.
    """
    queue = deque(v for v in sorted(alive) if degree[v] < k)
    queued = set(queue)
    removed: List[int] = []
    while queue:
        v = queue.popleft()
        alive.discard(v)
        removed.append(v)
        for w in neighbours[v]:
            if w in alive and w not in queued:
                degree[w] -= 1
                if degree[w] < k:
                    queue.append(w)
                    queued.add(w)
    return removed


def kg_core(graph: Hypergraph, k: int, g: int, alive: Optional[Iterable[int]] = None) -> CoreResult:
    """The (k,g)-core, optionally peeled from a subset already known to contain it."""
    if k < 1 or g < 1:
        raise ValueError(f"k and g must be >= 1 (got k={k}, g={g})")
    live: Set[int] = set(graph.nodes) if alive is None else set(alive)
    neighbours = _qualified_neighbours(graph, g, live)
    degree = {v: len(ws) for v, ws in neighbours.items()}
    _peel(neighbours, degree, live, k)
    return CoreResult(members=frozenset(live), k=k, g=g)


def enum_h(graph: Hypergraph, g: int) -> ShellDecomposition:
    """Shells for a fixed g, reusing the surviving node set across k."""
    if g < 1:
        raise ValueError(f"g must be >= 1 (got {g})")
    live: Set[int] = set(graph.nodes)
    neighbours = _qualified_neighbours(graph, g, live)
    degree = {v: len(ws) for v, ws in neighbours.items()}

    shells: List[FrozenSet[int]] = []
    k = 1
    while live:
        removed = _peel(neighbours, degree, live, k)
        if k > 1:
            shells.append(frozenset(removed))
        k += 1
    decomposition = ShellDecomposition(g=g, shells=shells)
    LOGGER.debug("shells_enumerated", g=g, k_star=decomposition.k_star)
    return decomposition


def coreness_tables(graph: Hypergraph, threads: int = 1) -> CorenessResult:
    decompositions: Dict[int, ShellDecomposition] = {}

    if threads > 1:
        bound = graph.max_pair_count
        with ThreadPoolExecutor(max_workers=threads) as ex:
            futures = {g: ex.submit(enum_h, graph, g) for g in range(1, bound + 1)}
            for g in range(1, bound + 1):
                decomposition = futures[g].result()
                if not decomposition:
                    break
                decompositions[g] = decomposition
    else:
        g = 1
        while True:
            decomposition = enum_h(graph, g)
            if not decomposition:
                break
            decompositions[g] = decomposition
            g += 1

    g_star = len(decompositions)
    k_star_by_g = {g: d.k_star for g, d in decompositions.items()}
    table = CorenessTable(g_star=g_star)
    for g in range(1, g_star + 1):
        for k, shell in enumerate(decompositions[g].shells, start=1):
            for v in shell:
                row = table.values.setdefault(v, [0] * g_star)
                row[g - 1] = k

    k_star = k_star_by_g.get(1, 0)
    LOGGER.info("coreness_computed", g_star=g_star, k_star=k_star, threads=threads)
    return CorenessResult(
        decompositions=decompositions,
        table=table,
        g_star=g_star,
        k_star=k_star,
        k_star_by_g=k_star_by_g,
    )
