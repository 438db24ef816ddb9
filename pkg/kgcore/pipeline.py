import os
from typing import Iterable, List, Optional, Sequence, Tuple

import structlog
from pydantic import TypeAdapter

from kgcore.analytics import bench, scalability_sweep, size_bench, size_windows, storage_stats
from kgcore.generator import write_generated
from kgcore.hypergraph import Hypergraph, read_dataset
from kgcore.index import IndexTree, build_index
from kgcore.models import (
    ALL_VARIANTS,
    INDEX_SUFFIX,
    BenchReport,
    GenConfig,
    IndexStats,
    ScalePoint,
    SizeBenchReport,
    Variant,
)
from kgcore.peeling import kg_core
from kgcore.query import query_labels, size_bounded_query
from kgcore.store import load_index_file, save_index_file

LOGGER = structlog.get_logger()


def parse_variants(value: str) -> List[Variant]:
    if value.strip().lower() == "all":
        return list(ALL_VARIANTS)
    return [Variant.from_cli(name.strip()) for name in value.split(",") if name.strip()]


def default_index_path(input_path: str) -> str:
    stem, _ = os.path.splitext(input_path)
    return stem + INDEX_SUFFIX


def render_lines(lines: Iterable[str]) -> str:
    return "".join(line + "\n" for line in lines)


def write_output(text: str, output: Optional[str]) -> None:
    if output is None:
        return
    with open(output, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def phase_build(input_path: str, variant: Variant, output: str, threads: int) -> Tuple[IndexTree, IndexStats]:
    LOGGER.info("phase_build", input=input_path, variant=variant.value, threads=threads)
    graph = read_dataset(input_path)
    tree = build_index(graph, variant, threads=threads)
    save_index_file(tree, output)
    stats = storage_stats(tree)
    LOGGER.info("phase_build_complete", output=output, entries=stats.total_entries)
    return tree, stats


def phase_query(index_path: str, k: int, g: int, input_path: Optional[str] = None) -> List[str]:
    graph: Optional[Hypergraph] = read_dataset(input_path) if input_path else None
    tree = load_index_file(index_path, graph)
    return query_labels(tree, k, g)


def phase_size_query(index_path: str, lb: int, ub: int) -> List[str]:
    tree = load_index_file(index_path)
    return [f"{k} {g} {size}" for (k, g), size in size_bounded_query(tree, lb, ub)]


def phase_peel(input_path: str, k: int, g: int) -> List[str]:
    graph = read_dataset(input_path)
    core = kg_core(graph, k, g)
    return [graph.label(v) for v in sorted(core.members)]


def phase_bench(
    input_path: str,
    variants: Sequence[Variant],
    threads: int,
    runs: int,
    json_path: Optional[str] = None,
) -> BenchReport:
    graph = read_dataset(input_path)
    report = bench(graph, variants, threads=threads, runs=runs, dataset=os.path.basename(input_path))
    if json_path:
        write_output(report.model_dump_json(indent=2) + "\n", json_path)
        LOGGER.info("bench_report_saved", file=json_path)
    return report


def phase_gen(config: GenConfig, output: str) -> int:
    with open(output, "w", encoding="utf-8", newline="\n") as f:
        count = write_generated(config, f)
    LOGGER.info("dataset_written", file=output, edges=count)
    return count


def phase_scale(
    sizes: Sequence[int],
    edges_per_node: int,
    cmin: int,
    cmax: int,
    seed: int,
    variants: Sequence[Variant],
    threads: int,
    json_path: Optional[str] = None,
) -> List[ScalePoint]:
    points = scalability_sweep(sizes, edges_per_node, cmin, cmax, seed, variants, threads)
    if json_path:
        payload = TypeAdapter(List[ScalePoint]).dump_json(points, indent=2).decode("utf-8")
        write_output(payload + "\n", json_path)
    return points


def phase_size_bench(
    input_path: str,
    variant: Variant,
    seed: int,
    windows: int,
    threads: int,
    json_path: Optional[str] = None,
) -> SizeBenchReport:
    graph = read_dataset(input_path)
    tree = build_index(graph, variant, threads=threads)
    report = size_bench(graph, tree, size_windows(count=windows, seed=seed), seed, os.path.basename(input_path))
    if json_path:
        write_output(report.model_dump_json(indent=2) + "\n", json_path)
        LOGGER.info("size_bench_report_saved", file=json_path)
    return report
