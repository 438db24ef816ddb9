from typing import List, TextIO

import numpy as np
import structlog

from kgcore.hypergraph import Hypergraph
from kgcore.models import GenConfig

LOGGER = structlog.get_logger()


def generate_edges(config: GenConfig) -> List[List[str]]:
    """m hyperedges; each draws a uniform cardinality in [cmin, cmax], then that many distinct nodes."""
    rng = np.random.default_rng(config.seed)
    cardinalities = rng.integers(config.cmin, config.cmax + 1, size=config.m)
    edges: List[List[str]] = []
    for card in cardinalities:
        members = rng.choice(config.n, size=int(card), replace=False)
        edges.append([str(v + 1) for v in sorted(members.tolist())])
    LOGGER.info("hypergraph_generated", n=config.n, m=config.m, seed=config.seed)
    return edges


def generate_hypergraph(config: GenConfig) -> Hypergraph:
    return Hypergraph.from_edges(generate_edges(config))


def write_generated(config: GenConfig, sink: TextIO) -> int:
    edges = generate_edges(config)
    sink.write(f"# generated n={config.n} m={config.m} c=[{config.cmin},{config.cmax}] seed={config.seed}\n")
    for edge in edges:
        sink.write(" ".join(edge))
        sink.write("\n")
    return len(edges)
