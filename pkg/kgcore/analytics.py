import statistics
import time
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog

from kgcore.generator import generate_hypergraph
from kgcore.hypergraph import Hypergraph
from kgcore.index import CoreSizeTable, IndexTree, build_index
from kgcore.models import (
    ALL_VARIANTS,
    BYTES_PER_ENTRY,
    CONSTRUCTION_RUNS,
    DEFAULT_EDGES_PER_NODE,
    QUARTILES,
    SIZE_LB_RANGE,
    SIZE_SPAN_RANGE,
    SIZE_WINDOWS,
    SUITE_SIZE,
    BenchReport,
    GenConfig,
    IndexStats,
    JaccardMode,
    JaccardReport,
    Position,
    Query,
    QuerySuite,
    ScalePoint,
    SizeBenchReport,
    SizeQuery,
    SizeWindow,
    Variant,
)
from kgcore.peeling import coreness_tables, kg_core
from kgcore.query import query, size_bounded_query, size_bounded_query_peeling

LOGGER = structlog.get_logger()


def storage_stats(tree: IndexTree) -> IndexStats:
    leaf_count = 0
    empty_leaf_count = 0
    entries = 0
    aux_count = 0
    aux_records = 0
    aux_entries = 0
    aux_depth_sum = 0
    for leaf in tree.leaves():
        leaf_count += 1
        entries += len(leaf.value)
        if not leaf.value:
            empty_leaf_count += 1
        if leaf.aux:
            depths = leaf.aux.nonempty_depths()
            aux_count += 1
            aux_records += len(depths)
            aux_entries += leaf.aux.entries()
            aux_depth_sum += max(depths)
    entries += aux_entries
    return IndexStats(
        variant=tree.variant,
        total_entries=entries,
        approx_bytes=entries * BYTES_PER_ENTRY + leaf_count + aux_records,
        leaf_count=leaf_count,
        empty_leaf_count=empty_leaf_count,
        aux_count=aux_count,
        aux_depth_records=aux_records,
        mean_aux_depth=aux_depth_sum / aux_count if aux_count else 0.0,
        mean_aux_size=aux_entries / aux_count if aux_count else 0.0,
    )


def jaccard(a: Iterable[int], b: Iterable[int]) -> Optional[float]:
    left, right = set(a), set(b)
    union = left | right
    if not union:
        return None
    return len(left & right) / len(union)


def derived_leaves(tree: IndexTree, mode: JaccardMode) -> Dict[Position, Set[int]]:
    """Leaf sets of a NAIVE or exact-coreness tree, rebuilt from any variant's query results.

    An exact-coreness leaf (k, g) is core(k, g) minus core(k+1, g) minus core(k, g+1).
    """
    cores: Dict[Position, Set[int]] = {}
    for g, row in tree.core_sizes.sizes.items():
        for k in range(1, len(row) + 1):
            cores[(k, g)] = set(query(tree, k, g))
    if mode == JaccardMode.NAIVE:
        return cores
    empty: Set[int] = set()
    return {
        (k, g): core - cores.get((k + 1, g), empty) - cores.get((k, g + 1), empty)
        for (k, g), core in cores.items()
    }


def diagonal_jaccard(tree: IndexTree, mode: JaccardMode = JaccardMode.HV) -> JaccardReport:
    """Overlap of the diagonal neighbours (k-1, g) and (k, g-1) of every position that has both.

    Leaves are derived per `mode`, so the figure does not depend on the variant the tree was built as.
    """
    leaves = derived_leaves(tree, mode)
    per_position: Dict[str, float] = {}
    # position (k+1, g) sits between its left neighbour (k, g) and (k+1, g-1)
    for k, g in sorted(leaves, key=lambda p: (p[1], p[0])):
        right = leaves.get((k + 1, g - 1))
        if right is None:
            continue
        score = jaccard(leaves[(k, g)], right)
        if score is not None:
            per_position[f"{k + 1},{g}"] = score
    mean = statistics.fmean(per_position.values()) if per_position else 0.0
    LOGGER.debug("diagonal_jaccard", mode=mode.value, positions=len(per_position))
    return JaccardReport(
        variant=tree.variant, mode=mode, per_position=per_position, mean=mean, count=len(per_position)
    )


def _sorted_cores(sizes: CoreSizeTable) -> List[Tuple[int, int, int]]:
    cores = [
        (size, g, k)
        for g, row in sizes.sizes.items()
        for k, size in enumerate(row, start=1)
        if size > 0
    ]
    cores.sort()
    return cores


def _nearest_rank(count: int, percentile: int) -> int:
    return max(0, (percentile * count + 99) // 100 - 1)


def percentile_query_suite(tree: IndexTree, suite_size: int = SUITE_SIZE) -> QuerySuite:
    """Cores at the 1st..100th size percentiles (nearest rank, ties by (g, k))."""
    cores = _sorted_cores(tree.core_sizes)
    if len(cores) < suite_size:
        LOGGER.warning("suite_short", found=len(cores), wanted=suite_size)
        picked = cores
        short = True
    else:
        picked = [cores[_nearest_rank(len(cores), p * 100 // suite_size)] for p in range(1, suite_size + 1)]
        short = False
    return QuerySuite(
        queries=[Query(k=k, g=g) for _, g, k in picked],
        sizes=[size for size, _, _ in picked],
        short=short,
    )


def quartile_queries(tree: IndexTree) -> List[Query]:
    cores = _sorted_cores(tree.core_sizes)
    if not cores:
        return []
    return [Query(k=cores[i][2], g=cores[i][1]) for i in (_nearest_rank(len(cores), p) for p in QUARTILES)]


def _timed(fn: Callable[[], object]) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def _suite_seconds(run: Callable[[int, int], object], suite: Sequence[Query]) -> float:
    start = time.perf_counter()
    for q in suite:
        run(q.k, q.g)
    return time.perf_counter() - start


def bench(
    graph: Hypergraph,
    variants: Sequence[Variant] = ALL_VARIANTS,
    suite: Optional[QuerySuite] = None,
    threads: int = 1,
    runs: int = CONSTRUCTION_RUNS,
    dataset: str = "",
) -> BenchReport:
    report = BenchReport(dataset=dataset, nodes=graph.num_nodes, edges=graph.num_edges, threads=threads)
    trees: Dict[Variant, IndexTree] = {}

    for variant in variants:
        timings: List[float] = []
        for _ in range(max(1, runs)):
            start = time.perf_counter()
            trees[variant] = build_index(graph, variant, threads=threads)
            timings.append(time.perf_counter() - start)
        report.construction_seconds[variant.value] = statistics.median(timings)
        report.entries[variant.value] = trees[variant].total_entries()
        LOGGER.info("construction_timed", variant=variant.value, seconds=report.construction_seconds[variant.value])

    if suite is None:
        reference = next(iter(trees.values()), None)
        if reference is None:
            reference = build_index(graph, Variant.NAIVE, threads=threads)
        suite = percentile_query_suite(reference)
    report.suite_size = len(suite.queries)
    report.suite_short = suite.short

    for variant, tree in trees.items():
        report.query_seconds[variant.value] = _suite_seconds(lambda k, g, t=tree: query(t, k, g), suite.queries)
    report.peeling_seconds = _suite_seconds(lambda k, g: kg_core(graph, k, g), suite.queries)

    LOGGER.info(
        "bench_complete",
        suite=report.suite_size,
        peeling_seconds=report.peeling_seconds,
        query_seconds=report.query_seconds,
    )
    return report


def _per_query_seconds(run: Callable[[int, int], object], queries: Sequence[Query], repeats: int = 5) -> float:
    """Mean over `queries` of the best of `repeats` timings."""
    samples = []
    for q in queries:
        samples.append(min(_timed(lambda: run(q.k, q.g)) for _ in range(repeats)))
    return statistics.fmean(samples) if samples else 0.0


def scalability_sweep(
    sizes: Sequence[int],
    edges_per_node: int = DEFAULT_EDGES_PER_NODE,
    cmin: int = 2,
    cmax: int = 5,
    seed: int = 0,
    variants: Sequence[Variant] = ALL_VARIANTS,
    threads: int = 1,
) -> List[ScalePoint]:
    points: List[ScalePoint] = []
    for n in sizes:
        config = GenConfig(n=n, m=n * edges_per_node, cmin=cmin, cmax=cmax, seed=seed)
        graph = generate_hypergraph(config)
        coreness = coreness_tables(graph, threads=threads)
        point = ScalePoint(n=n, nodes=graph.num_nodes, edges=graph.num_edges)
        queries: List[Query] = []
        for variant in variants:
            tree = build_index(graph, variant, threads=threads, coreness=coreness)
            if not queries:
                queries = quartile_queries(tree)
            point.per_query_seconds[variant.value] = _per_query_seconds(lambda k, g, t=tree: query(t, k, g), queries)
        point.peeling_seconds = _per_query_seconds(lambda k, g: kg_core(graph, k, g), queries, repeats=1)
        LOGGER.info(
            "scale_point", n=n, per_query_seconds=point.per_query_seconds, peeling_seconds=point.peeling_seconds
        )
        points.append(point)
    return points


def size_windows(
    count: int = SIZE_WINDOWS,
    seed: int = 0,
    lb_range: Tuple[int, int] = SIZE_LB_RANGE,
    span_range: Tuple[int, int] = SIZE_SPAN_RANGE,
) -> List[SizeQuery]:
    """Seeded [lb, lb + t] windows with lb and t drawn uniformly from the inclusive ranges."""
    rng = np.random.default_rng(seed)
    windows: List[SizeQuery] = []
    for _ in range(count):
        lb = int(rng.integers(lb_range[0], lb_range[1] + 1))
        span = int(rng.integers(span_range[0], span_range[1] + 1))
        windows.append(SizeQuery(lb=lb, ub=lb + span))
    return windows


def size_bench(
    graph: Hypergraph,
    tree: IndexTree,
    windows: Optional[Sequence[SizeQuery]] = None,
    seed: int = 0,
    dataset: str = "",
) -> SizeBenchReport:
    """Time size-bounded queries on the index against the peeling baseline over the same windows."""
    if windows is None:
        windows = size_windows(seed=seed)
    report = SizeBenchReport(
        dataset=dataset, nodes=graph.num_nodes, edges=graph.num_edges, variant=tree.variant, seed=seed
    )
    for window in windows:
        start = time.perf_counter()
        found = size_bounded_query(tree, window.lb, window.ub)
        index_seconds = time.perf_counter() - start
        peeling_seconds = _timed(lambda: size_bounded_query_peeling(graph, window.lb, window.ub))
        report.windows.append(
            SizeWindow(
                lb=window.lb,
                ub=window.ub,
                pairs=len(found),
                index_seconds=index_seconds,
                peeling_seconds=peeling_seconds,
            )
        )
    report.index_seconds = sum(w.index_seconds for w in report.windows)
    report.peeling_seconds = sum(w.peeling_seconds for w in report.windows)
    report.mean_pairs = statistics.fmean(w.pairs for w in report.windows) if report.windows else 0.0
    LOGGER.info(
        "size_bench_complete",
        windows=len(report.windows),
        mean_pairs=report.mean_pairs,
        index_seconds=report.index_seconds,
        peeling_seconds=report.peeling_seconds,
    )
    return report
