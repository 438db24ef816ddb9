import io
import random

import pytest

from kgcore.hypergraph import (
    Hypergraph,
    cooccurrence,
    graph_stats,
    parse_dataset,
    read_dataset,
    write_dataset,
)
from kgcore.models import DatasetParseError
from kgcore.peeling import coreness_tables, kg_core
from tests.conftest import ids, pair_counts


class TestParseDataset:
    """Line format parsing and id remapping."""

    def test_duplicate_edges_are_kept(self):
        graph = parse_dataset(io.StringIO("1 2 3\n1 2 3\n"))
        assert graph.num_nodes == 3
        assert graph.num_edges == 2
        assert graph.cooccurrence_of(graph.node_id("1"))[graph.node_id("2")] == 2

    def test_comments_and_blank_lines_skipped(self):
        graph = parse_dataset(io.StringIO("a b\n\n# note\nb c\n"))
        assert graph.num_nodes == 3
        assert graph.num_edges == 2

    def test_first_appearance_order(self):
        graph = parse_dataset(io.StringIO("z y\nx z\n"))
        assert graph.labels == ["z", "y", "x"]

    def test_duplicate_labels_within_line_collapse(self):
        graph = parse_dataset(io.StringIO("a a b\n"))
        assert graph.edges == [(0, 1)]

    def test_singleton_edge_is_legal(self):
        graph = parse_dataset(io.StringIO("solo\n"))
        assert graph.num_edges == 1
        assert graph.cooccurrence_of(0) == {}

    def test_int_label_type_rejects_garbage(self):
        with pytest.raises(DatasetParseError) as info:
            parse_dataset(io.StringIO("1 2\n3 x4\n"), label_type="int")
        assert info.value.line == 2
        assert info.value.token == "x4"

    def test_str_label_type_rejects_control_characters(self):
        with pytest.raises(DatasetParseError) as info:
            parse_dataset(io.StringIO("a b\n# c\nd \x00e\n"))
        assert info.value.line == 3

    def test_incidence_lists_match_edges(self, toy_graph):
        for v in toy_graph.nodes:
            expected = [i for i, e in enumerate(toy_graph.edges) if v in e]
            assert toy_graph.incidence[v] == expected

    def test_round_trip_keeps_id_remap(self, random_graph):
        graph = random_graph(3)
        sink = io.StringIO()
        write_dataset(graph, sink)
        again = parse_dataset(io.StringIO(sink.getvalue()))
        assert again.labels == graph.labels
        assert again.edges == graph.edges
        assert again.fingerprint == graph.fingerprint

    def test_fingerprint_distinguishes_datasets(self):
        a = parse_dataset(io.StringIO("1 2\n"))
        b = parse_dataset(io.StringIO("1 3\n"))
        assert a.fingerprint != b.fingerprint


class TestCooccurrence:
    """Pair counts c(v, w)."""

    def test_toy_node_one(self, toy_graph):
        g = toy_graph
        counts = cooccurrence(g, g.node_id("1"), g.nodes)
        assert counts == {g.node_id("2"): 3, g.node_id("3"): 2, g.node_id("4"): 1}

    def test_alive_singleton_is_empty(self, toy_graph):
        v = toy_graph.node_id("4")
        assert cooccurrence(toy_graph, v, {v}) == {}

    def test_single_edge(self):
        g = Hypergraph.from_edges([["1", "2", "3"]])
        assert cooccurrence(g, 0, g.nodes) == {1: 1, 2: 1}

    def test_node_outside_alive_is_rejected(self, toy_graph):
        with pytest.raises(ValueError):
            cooccurrence(toy_graph, 0, {1, 2})

    def test_symmetry_and_degree_sum(self, random_graph):
        graph = random_graph(11)
        for v in graph.nodes:
            counts = graph.cooccurrence_of(v)
            assert sum(counts.values()) == sum(len(graph.edges[i]) - 1 for i in graph.incidence[v])
            for w, c in counts.items():
                assert c >= 1
                assert graph.cooccurrence_of(w)[v] == c

    @pytest.mark.parametrize("seed", range(10))
    def test_restriction_matches_induced_multiset(self, random_graph, seed):
        graph = random_graph(seed, n_max=30, m_max=60)
        rng = random.Random(seed)
        alive = {v for v in graph.nodes if rng.random() < 0.6}
        induced = [tuple(v for v in e if v in alive) for e in graph.edges]
        for v in alive:
            expected = {}
            for e in induced:
                if v in e:
                    for w in e:
                        if w != v:
                            expected[w] = expected.get(w, 0) + 1
            assert cooccurrence(graph, v, alive) == expected

    def test_matches_brute_force_pairs(self, toy_graph):
        brute = pair_counts(toy_graph)
        for v in toy_graph.nodes:
            for w, c in toy_graph.cooccurrence_of(v).items():
                assert brute[(v, w)] == c

    def test_max_pair_count(self, toy_graph):
        assert toy_graph.max_pair_count == 3


class TestGraphStats:
    """|V|, |E| and mean neighbour count."""

    def test_single_edge(self):
        assert graph_stats(Hypergraph.from_edges([["1", "2"]])) == (2, 1, 1.0)

    def test_toy(self, toy_graph):
        nodes, edges, mean = graph_stats(toy_graph)
        assert (nodes, edges) == (6, 6)
        assert mean == pytest.approx(10 / 3)

    def test_empty(self):
        assert graph_stats(Hypergraph.from_edges([])) == (0, 0, 0.0)

    def test_toy_neighbour_sets(self, toy_graph):
        g = toy_graph
        assert set(g.cooccurrence_of(g.node_id("6"))) == ids(g, 4, 5)
        assert set(g.cooccurrence_of(g.node_id("4"))) == ids(g, 1, 2, 3, 5, 6)


class TestCooccurrenceMemory:
    """Per-node maps are dropped unless the whole graph was precomputed."""

    def test_lazy_mode_keeps_nothing(self, random_graph):
        graph = random_graph(3)
        kg_core(graph, 1, 1)
        coreness_tables(graph)
        assert graph.cached_cooccurrence == 0

    def test_precompute_fills_every_node(self, random_graph):
        graph = random_graph(3)
        graph.precompute_cooccurrence()
        assert graph.cached_cooccurrence == graph.num_nodes
        assert kg_core(graph, 2, 1).members == kg_core(random_graph(3), 2, 1).members

    def test_lazy_and_cached_maps_agree(self, toy_graph):
        lazy = [toy_graph.cooccurrence_of(v) for v in toy_graph.nodes]
        toy_graph.precompute_cooccurrence()
        assert [toy_graph.cooccurrence_of(v) for v in toy_graph.nodes] == lazy


class TestReadDataset:
    """File decoding."""

    def test_reads_utf8_labels(self, tmp_path):
        path = tmp_path / "labels.hg"
        path.write_bytes("café thé\r\nthé 茶\n".encode("utf-8"))
        graph = read_dataset(str(path))
        assert graph.labels == ["café", "thé", "茶"]
        assert graph.num_edges == 2

    def test_invalid_utf8_reports_line(self, tmp_path):
        path = tmp_path / "bad.hg"
        path.write_bytes(b"1 2\n3 \xff4\n")
        with pytest.raises(DatasetParseError) as info:
            read_dataset(str(path))
        assert info.value.line == 2
        assert "invalid UTF-8" in str(info.value)
