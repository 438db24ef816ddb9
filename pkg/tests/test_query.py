import random

import pytest
from pydantic import ValidationError

from kgcore.hypergraph import Hypergraph
from kgcore.index import build_index, build_lse_hvd
from kgcore.models import ALL_VARIANTS, Variant
from kgcore.peeling import coreness_tables, kg_core
from kgcore.query import (
    core_size,
    query,
    query_labels,
    query_lse_h,
    query_lse_hv,
    query_lse_hvd,
    query_naive,
    size_bounded_query,
    size_bounded_query_peeling,
)
from tests.conftest import ids, make_random_graph


def all_trees(graph):
    coreness = coreness_tables(graph)
    return {v: build_index(graph, v, coreness=coreness) for v in ALL_VARIANTS}, coreness


def assert_oracle_equivalent(graph):
    trees, coreness = all_trees(graph)
    for g in range(1, coreness.g_star + 2):
        for k in range(1, coreness.k_star + 2):
            expected = sorted(kg_core(graph, k, g).members)
            for variant, tree in trees.items():
                assert query(tree, k, g) == expected, (variant, k, g)


class TestVariantQueries:
    """Per-variant retrieval on the toy graph."""

    def test_naive(self, toy_graph):
        tree = build_index(toy_graph, Variant.NAIVE)
        assert set(query_naive(tree, 2, 2)) == ids(toy_graph, 1, 2, 3, 4, 5, 6)
        assert query_naive(tree, 5, 5) == []
        assert set(query_naive(tree, 1, 3)) == ids(toy_graph, 1, 2, 4, 5)

    def test_lse_h(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_H)
        assert set(query_lse_h(tree, 2, 1)) == ids(toy_graph, 1, 2, 3, 4, 5, 6)
        assert query_lse_h(tree, 3, 2) == []
        for g in range(1, 4):
            assert set(query_lse_h(tree, 1, g)) == kg_core(toy_graph, 1, g).members

    def test_lse_hv(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HV)
        assert set(query_lse_hv(tree, 2, 2)) == ids(toy_graph, 1, 2, 3, 4, 5, 6)
        assert set(query_lse_hv(tree, 1, 1)) == ids(toy_graph, 1, 2, 3, 4, 5, 6)
        assert set(query_lse_hv(tree, 1, 3)) == ids(toy_graph, 1, 2, 4, 5)

    def test_lse_hvd(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert set(query_lse_hvd(tree, 3, 1)) == ids(toy_graph, 1, 2, 3, 4)
        assert set(query_lse_hvd(tree, 2, 2)) == ids(toy_graph, 1, 2, 3, 4, 5, 6)
        assert query_lse_hvd(tree, 3, 2) == []

    def test_starting_aux_is_skipped(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        # aux(2,3) holds node 5 at depth 1; the (2,3)-core is empty
        assert tree.leaf(2, 3).aux.depths[1] == ids(toy_graph, 5)
        assert query_lse_hvd(tree, 2, 3) == []

    def test_wrong_variant_rejected(self, toy_graph):
        tree = build_index(toy_graph, Variant.NAIVE)
        with pytest.raises(ValueError):
            query_lse_h(tree, 1, 1)

    def test_non_positive_parameters_rejected(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_H)
        with pytest.raises(ValidationError):
            query(tree, 0, 1)

    def test_results_ascending(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        result = query(tree, 1, 1)
        assert result == sorted(result)

    def test_labels(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert query_labels(tree, 1, 3) == ["1", "2", "4", "5"]

    def test_empty_graph(self):
        trees, _ = all_trees(Hypergraph.from_edges([]))
        for tree in trees.values():
            assert query(tree, 1, 1) == []


class TestOracleEquivalence:
    """Every variant returns exactly the peeled core."""

    def test_toy(self, toy_graph):
        assert_oracle_equivalent(toy_graph)

    @pytest.mark.parametrize("seed", range(100))
    def test_random(self, seed):
        assert_oracle_equivalent(make_random_graph(seed))

    @pytest.mark.parametrize("seed", range(20))
    def test_dense_small(self, seed):
        # few nodes, many edges: deep g branches and deep aux chains
        assert_oracle_equivalent(make_random_graph(1000 + seed, n_max=12, m_max=120, cmin=2, cmax=4))


class TestDepthFilter:
    """The aux depth bound is tight."""

    def test_admitting_one_more_depth_overshoots(self):
        witnessed = False
        for seed in range(60):
            graph = make_random_graph(2000 + seed, n_max=15, m_max=120, cmin=2, cmax=4)
            tree = build_lse_hvd(graph)
            for leaf in tree.leaves():
                if leaf.aux is None:
                    continue
                for d, members in leaf.aux.depths.items():
                    # query whose offset to this aux position is d - 1
                    for back_k in range(d):
                        back_g = d - 1 - back_k
                        k, g = leaf.k - back_k, leaf.g - back_g
                        if k < 1 or g < 1:
                            continue
                        core = kg_core(graph, k, g).members
                        if members - core:
                            witnessed = True
                            break
        assert witnessed


class TestCoreSize:
    """Sizes straight from the size table."""

    def test_toy(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert core_size(tree, 2, 1) == 6
        assert core_size(tree, 9, 9) == 0
        assert core_size(tree, 1, 3) == 4

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone(self, seed):
        tree = build_index(make_random_graph(seed), Variant.LSE_H)
        for g in range(1, tree.g_star + 1):
            for k in range(1, tree.k_max(g) + 1):
                assert core_size(tree, k + 1, g) <= core_size(tree, k, g)
                assert core_size(tree, k, g + 1) <= core_size(tree, k, g)


class TestSizeBoundedQuery:
    """Binary-searched size windows against the peeling baseline."""

    def test_toy_wide_window(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert size_bounded_query(tree, 4, 6) == [
            ((1, 1), 6),
            ((2, 1), 6),
            ((3, 1), 4),
            ((1, 2), 6),
            ((2, 2), 6),
            ((1, 3), 4),
        ]

    def test_toy_too_large(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert size_bounded_query(tree, 7, 10) == []

    def test_toy_exact(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert size_bounded_query(tree, 4, 4) == [((3, 1), 4), ((1, 3), 4)]

    def test_inverted_bounds_rejected(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        with pytest.raises(ValidationError):
            size_bounded_query(tree, 5, 4)

    def test_peeling_baseline_toy(self, toy_graph):
        tree = build_index(toy_graph, Variant.LSE_HVD)
        assert size_bounded_query_peeling(toy_graph, 4, 6) == size_bounded_query(tree, 4, 6)

    def test_peeling_baseline_empty_graph(self):
        assert size_bounded_query_peeling(Hypergraph.from_edges([]), 1, 5) == []

    @pytest.mark.parametrize("seed", range(50))
    def test_random_windows(self, seed):
        graph = make_random_graph(seed, n_max=60)
        tree = build_index(graph, Variant.LSE_HVD)
        rng = random.Random(seed)
        for _ in range(10):
            lb = rng.randint(1, graph.num_nodes)
            ub = lb + rng.randint(0, graph.num_nodes)
            assert size_bounded_query(tree, lb, ub) == size_bounded_query_peeling(graph, lb, ub)
