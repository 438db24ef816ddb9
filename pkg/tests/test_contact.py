import os
import random

import pytest

from kgcore.analytics import bench
from kgcore.hypergraph import graph_stats, read_dataset
from kgcore.index import build_index
from kgcore.models import ALL_VARIANTS, Variant
from kgcore.peeling import coreness_tables, kg_core
from kgcore.query import query

CONTACT_PATH = os.getenv("KGCORE_CONTACT_PATH")

pytestmark = pytest.mark.skipif(
    not CONTACT_PATH or not os.path.exists(CONTACT_PATH),
    reason="set KGCORE_CONTACT_PATH to the Contact hypergraph dataset",
)


@pytest.fixture(scope="module")
def contact():
    graph = read_dataset(CONTACT_PATH)
    coreness = coreness_tables(graph)
    trees = {v: build_index(graph, v, coreness=coreness) for v in ALL_VARIANTS}
    return graph, coreness, trees


def reduction(smaller: int, larger: int) -> float:
    return 100.0 * (1 - smaller / larger)


class TestContactDataset:
    """Reproduction on the public Contact hypergraph."""

    def test_sizes(self, contact):
        graph, _, _ = contact
        nodes, edges, mean_neighbours = graph_stats(graph)
        assert (nodes, edges) == (242, 12704)
        assert mean_neighbours == pytest.approx(68.74, abs=0.01)

    def test_coreness_extents(self, contact):
        _, coreness, _ = contact
        assert coreness.k_star == 47
        assert coreness.g_star == 54

    def test_reduction_ratios(self, contact):
        _, _, trees = contact
        entries = {v: trees[v].total_entries() for v in ALL_VARIANTS}
        assert reduction(entries[Variant.LSE_H], entries[Variant.NAIVE]) == pytest.approx(86, abs=5)
        assert reduction(entries[Variant.LSE_HV], entries[Variant.LSE_H]) == pytest.approx(40, abs=5)
        assert reduction(entries[Variant.LSE_HVD], entries[Variant.LSE_HV]) == pytest.approx(9, abs=5)

    def test_sampled_queries_match_peeling(self, contact):
        graph, coreness, trees = contact
        rng = random.Random(0)
        for _ in range(20):
            g = rng.randint(1, coreness.g_star)
            k = rng.randint(1, coreness.k_star_by_g[g])
            expected = sorted(kg_core(graph, k, g).members)
            for tree in trees.values():
                assert query(tree, k, g) == expected

    def test_query_speedup(self, contact):
        graph, _, _ = contact
        report = bench(graph, runs=1, dataset="contact")
        assert report.suite_size == 100
        for variant in ALL_VARIANTS:
            assert report.speedup(variant) >= 50
