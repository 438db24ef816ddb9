import random
from collections import Counter
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import pytest

from kgcore.hypergraph import Hypergraph, parse_dataset

TOY_TEXT = "1 2 3\n1 2 3\n1 2 4\n3 4 5\n4 5 6\n4 5 6\n"


def ids(graph: Hypergraph, *labels) -> FrozenSet[int]:
    """Internal ids for external labels."""
    return frozenset(graph.node_id(str(label)) for label in labels)


def pair_counts(graph: Hypergraph) -> Dict[Tuple[int, int], int]:
    counts: Counter = Counter()
    for edge in graph.edges:
        for v, w in combinations(edge, 2):
            counts[(v, w)] += 1
            counts[(w, v)] += 1
    return dict(counts)


def peel_oracle(graph: Hypergraph, k: int, g: int, order: Optional[Iterable[int]] = None) -> FrozenSet[int]:
    """Sweep-until-stable deletion fixpoint over brute-force pair counts."""
    counts = pair_counts(graph)
    sequence = list(order) if order is not None else list(graph.nodes)
    alive = set(sequence)
    changed = True
    while changed:
        changed = False
        for v in sequence:
            if v not in alive:
                continue
            qualified = sum(1 for w in alive if w != v and counts.get((v, w), 0) >= g)
            if qualified < k:
                alive.discard(v)
                changed = True
    return frozenset(alive)


def make_random_graph(seed: int, n_max: int = 100, m_max: int = 300, cmin: int = 2, cmax: int = 5) -> Hypergraph:
    rng = random.Random(seed)
    n = rng.randint(max(cmax, 6), n_max)
    m = rng.randint(1, m_max)
    edges = []
    for _ in range(m):
        card = rng.randint(cmin, cmax)
        edges.append([str(v) for v in rng.sample(range(1, n + 1), card)])
    return Hypergraph.from_edges(edges)


@pytest.fixture
def toy_graph() -> Hypergraph:
    return parse_dataset(TOY_TEXT.splitlines(keepends=True))


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.hg"
    path.write_text(TOY_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def random_graph():
    return make_random_graph
