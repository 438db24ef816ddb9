import hashlib
from collections import Counter
from typing import Dict, Iterable, Iterator, List, Optional, Set, TextIO, Tuple

import structlog

from kgcore.models import LABEL_TYPE, PRECOMPUTE_COOCCURRENCE, DatasetParseError

LOGGER = structlog.get_logger()

CooccurrenceMap = Dict[int, int]


class Hypergraph:
    """Node universe plus an ordered multiset of hyperedges.

    Internal ids are dense (0..|V|-1) and assigned in first-appearance order;
    `labels[i]` is the external label of id `i`. Edges are tuples of ids in
    ascending order. The object is treated as immutable once built.
    Co-occurrence maps are computed per call and dropped, unless
    `precompute_cooccurrence` has filled the whole-graph cache.
    """

    __slots__ = ("labels", "edges", "incidence", "_ids", "_cooc", "_keep_cooc")

    def __init__(self, labels: List[str], edges: List[Tuple[int, ...]]) -> None:
        self.labels = labels
        self.edges = edges
        self._ids = {label: i for i, label in enumerate(labels)}
        self.incidence: List[List[int]] = [[] for _ in labels]
        for idx, edge in enumerate(edges):
            for v in edge:
                self.incidence[v].append(idx)
        self._cooc: Dict[int, CooccurrenceMap] = {}
        self._keep_cooc = False

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[str]]) -> "Hypergraph":
        labels: List[str] = []
        ids: Dict[str, int] = {}
        out: List[Tuple[int, ...]] = []
        for raw in edges:
            members: Set[int] = set()
            for label in raw:
                label = str(label)
                if label not in ids:
                    ids[label] = len(labels)
                    labels.append(label)
                members.add(ids[label])
            if members:
                out.append(tuple(sorted(members)))
        return cls(labels, out)

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(len(self.labels))

    def node_id(self, label: str) -> int:
        return self._ids[label]

    def label(self, v: int) -> str:
        return self.labels[v]

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def cooccurrence_of(self, v: int) -> CooccurrenceMap:
        """c(v, w) for every w sharing at least one edge with v, over the original E."""
        cached = self._cooc.get(v)
        if cached is not None:
            return cached
        counts: Counter = Counter()
        for idx in self.incidence[v]:
            counts.update(self.edges[idx])
        counts.pop(v, None)
        result = dict(counts)
        if self._keep_cooc:
            self._cooc[v] = result
        return result

    def precompute_cooccurrence(self) -> None:
        self._keep_cooc = True
        for v in self.nodes:
            self.cooccurrence_of(v)
        LOGGER.debug("cooccurrence_precomputed", nodes=self.num_nodes)

    @property
    def cached_cooccurrence(self) -> int:
        """Number of per-node co-occurrence maps held in memory."""
        return len(self._cooc)

    @property
    def max_pair_count(self) -> int:
        best = 0
        for v in self.nodes:
            counts = self.cooccurrence_of(v)
            if counts:
                best = max(best, max(counts.values()))
        return best

    def to_lines(self) -> List[str]:
        return [" ".join(self.labels[v] for v in edge) for edge in self.edges]

    @property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update("\n".join(self.to_lines()).encode("utf-8"))
        return digest.hexdigest()


def _check_label(token: str, label_type: str, line_number: int) -> str:
    if label_type == "int":
        try:
            value = int(token)
        except ValueError:
            raise DatasetParseError(line_number, token, "expected integer label") from None
        if value < 0:
            raise DatasetParseError(line_number, token, "expected non-negative integer label")
        return str(value)
    if not token.isprintable():
        raise DatasetParseError(line_number, token)
    return token


def parse_dataset(stream: Iterable[str], label_type: Optional[str] = None) -> Hypergraph:
    """One hyperedge per line; '#' comments and blank lines are skipped."""
    label_type = label_type or LABEL_TYPE
    rows: List[List[str]] = []
    for line_number, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        rows.append([_check_label(tok, label_type, line_number) for tok in text.split()])

    graph = Hypergraph.from_edges(rows)
    LOGGER.info("dataset_parsed", nodes=graph.num_nodes, edges=graph.num_edges)
    if PRECOMPUTE_COOCCURRENCE:
        graph.precompute_cooccurrence()
    return graph


def _decoded_lines(stream: Iterable[bytes]) -> Iterator[str]:
    for line_number, raw in enumerate(stream, start=1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError:
            token = raw.rstrip(b"\r\n").decode("utf-8", errors="replace")
            raise DatasetParseError(line_number, token, "invalid UTF-8") from None


def read_dataset(path: str, label_type: Optional[str] = None) -> Hypergraph:
    with open(path, "rb") as f:
        return parse_dataset(_decoded_lines(f), label_type)


def write_dataset(graph: Hypergraph, sink: TextIO) -> None:
    for line in graph.to_lines():
        sink.write(line)
        sink.write("\n")


def cooccurrence(graph: Hypergraph, v: int, alive: Iterable[int]) -> CooccurrenceMap:
    """c(v, w) restricted to w in `alive`.

    Pair counts survive node removal under the multiset reading of the induced
    subhypergraph, so only neighbour membership is filtered here.
    """
    alive_set = alive if isinstance(alive, (set, frozenset)) else set(alive)
    if v not in alive_set:
        raise ValueError(f"node {v} is not in the alive set")
    return {w: c for w, c in graph.cooccurrence_of(v).items() if w in alive_set}


def graph_stats(graph: Hypergraph) -> Tuple[int, int, float]:
    """(|V|, |E|, mean neighbour count)."""
    if not graph.num_nodes:
        return 0, graph.num_edges, 0.0
    total = sum(len(graph.cooccurrence_of(v)) for v in graph.nodes)
    return graph.num_nodes, graph.num_edges, total / graph.num_nodes
