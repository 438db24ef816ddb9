import logging
import sys
from contextlib import contextmanager
from typing import List, Optional

import structlog
import typer

from kgcore.analytics import diagonal_jaccard, storage_stats
from kgcore.display import (
    console,
    print_bench_table,
    print_error,
    print_jaccard,
    print_scale_table,
    print_size_bench_table,
    print_stats,
    print_stats_table,
    print_step,
    print_success,
)
from kgcore.hypergraph import graph_stats, read_dataset
from kgcore.models import (
    DEFAULT_SCALE_SIZES,
    DEFAULT_THREADS,
    LOG_LEVEL,
    SIZE_WINDOWS,
    GenConfig,
    JaccardMode,
    KGCoreError,
    Variant,
)
from kgcore.peeling import coreness_tables
from kgcore.pipeline import (
    default_index_path,
    parse_variants,
    phase_bench,
    phase_build,
    phase_gen,
    phase_peel,
    phase_query,
    phase_scale,
    phase_size_bench,
    phase_size_query,
    render_lines,
    write_output,
)
from kgcore.store import load_index_file

app = typer.Typer(
    name="kgcore",
    help="Build (k,g)-core index trees over hypergraphs and answer core queries online.",
    rich_markup_mode="rich",
    no_args_is_help=True,
    add_completion=False,
)


def _configure_logs(verbose: bool):
    level = logging.INFO if verbose else getattr(logging, LOG_LEVEL, logging.WARNING)
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


@contextmanager
def _failures():
    try:
        yield
    except (OSError, KGCoreError, ValueError) as e:
        print_error(str(e))
        raise typer.Exit(1) from e


def _variant(value: str) -> Variant:
    try:
        return Variant.from_cli(value)
    except ValueError:
        raise typer.BadParameter(f"unknown variant {value!r} (naive, lse-h, lse-hv, lse-hvd)") from None


def _variants(value: str) -> List[Variant]:
    try:
        variants = parse_variants(value)
    except ValueError:
        raise typer.BadParameter(f"unknown variant list {value!r}") from None
    if not variants:
        raise typer.BadParameter("no variants given")
    return variants


def _emit(lines: List[str], output: Optional[str]):
    text = render_lines(lines)
    if output:
        write_output(text, output)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


@app.callback()
def root(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Show detailed log output on stderr"),
):
    _configure_logs(verbose)


@app.command()
def build(
    input: str = typer.Option(..., "--input", "-i", help="Dataset file, one hyperedge per line"),
    variant: str = typer.Option("lse-hvd", "--variant", help="naive | lse-h | lse-hv | lse-hvd"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Index file (default: <input>.kgidx)"),
    threads: int = typer.Option(DEFAULT_THREADS, "--threads", min=1, help="Workers for the per-g build"),
):
    """Build an index tree and save it as .kgidx."""
    chosen = _variant(variant)
    target = output or default_index_path(input)
    with _failures():
        _, stats = phase_build(input, chosen, target, threads)
    print_stats(stats)
    print_success(f"Index saved: [dim]{target}[/dim]")


@app.command()
def query(
    index: str = typer.Option(..., "--index", help="Index file built by `kgcore build`"),
    k: int = typer.Option(..., "-k", min=1, help="Neighbour threshold"),
    g: int = typer.Option(..., "-g", min=1, help="Co-occurrence threshold"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Write labels here instead of stdout"),
    input: Optional[str] = typer.Option(None, "--input", "-i", help="Verify the index against this dataset"),
):
    """Print the (k,g)-core, one label per line."""
    with _failures():
        labels = phase_query(index, k, g, input)
        _emit(labels, output)


@app.command()
def size_query(
    index: str = typer.Option(..., "--index", help="Index file built by `kgcore build`"),
    lb: int = typer.Option(..., "--lb", min=0, help="Inclusive lower bound on core size"),
    ub: int = typer.Option(..., "--ub", min=0, help="Inclusive upper bound on core size"),
    output: Optional[str] = typer.Option(None, "--output", "-o"),
):
    """Print every `k g size` whose core size lies in [lb, ub]."""
    with _failures():
        lines = phase_size_query(index, lb, ub)
        _emit(lines, output)


@app.command()
def peel(
    input: str = typer.Option(..., "--input", "-i", help="Dataset file"),
    k: int = typer.Option(..., "-k", min=1),
    g: int = typer.Option(..., "-g", min=1),
    output: Optional[str] = typer.Option(None, "--output", "-o"),
):
    """Compute a (k,g)-core from scratch with the peeling algorithm."""
    with _failures():
        labels = phase_peel(input, k, g)
        _emit(labels, output)


@app.command()
def stats(
    index: str = typer.Option(..., "--index", help="Index file"),
    jaccard: bool = typer.Option(False, "--jaccard", help="Also report diagonal Jaccard between adjacent leaves"),
    mode: JaccardMode = typer.Option(
        JaccardMode.HV,
        "--mode",
        case_sensitive=False,
        help="naive: full core leaves | hv: exact-coreness leaves",
    ),
    json_path: Optional[str] = typer.Option(None, "--json", help="Write stats as JSON"),
):
    """Storage and structure statistics for an index file."""
    with _failures():
        tree = load_index_file(index)
        summary = storage_stats(tree)
        if json_path:
            write_output(summary.model_dump_json(indent=2) + "\n", json_path)
    print_stats_table(summary)
    if jaccard:
        print_jaccard(diagonal_jaccard(tree, mode))


@app.command()
def describe(
    input: str = typer.Option(..., "--input", "-i", help="Dataset file"),
    threads: int = typer.Option(DEFAULT_THREADS, "--threads", min=1),
):
    """Dataset statistics: |V|, |E|, mean neighbour count, k* and g*."""
    with _failures():
        graph = read_dataset(input)
        nodes, edges, mean_neighbours = graph_stats(graph)
        coreness = coreness_tables(graph, threads=threads)
    print_step(
        input,
        {
            "|V|": nodes,
            "|E|": edges,
            "μ(N)": f"{mean_neighbours:.2f}",
            "k*": coreness.k_star,
            "g*": coreness.g_star,
        },
    )


@app.command()
def bench(
    input: str = typer.Option(..., "--input", "-i", help="Dataset file"),
    variants: str = typer.Option("all", "--variants", help="'all' or a comma list of variants"),
    threads: int = typer.Option(DEFAULT_THREADS, "--threads", min=1),
    runs: int = typer.Option(3, "--runs", min=1, help="Construction runs; the median is reported"),
    json_path: Optional[str] = typer.Option(None, "--json", help="Write the report as JSON"),
):
    """Time construction and the 100-percentile query suite against peeling."""
    chosen = _variants(variants)
    with _failures():
        report = phase_bench(input, chosen, threads, runs, json_path)
    print_bench_table(report)


@app.command()
def size_bench(
    input: str = typer.Option(..., "--input", "-i", help="Dataset file"),
    seed: int = typer.Option(..., "--seed", min=0, help="Seed for the random size windows"),
    windows: int = typer.Option(SIZE_WINDOWS, "--windows", min=1, help="Number of [lb, ub] windows"),
    variant: str = typer.Option("lse-hvd", "--variant", help="Index variant queried against peeling"),
    threads: int = typer.Option(DEFAULT_THREADS, "--threads", min=1),
    json_path: Optional[str] = typer.Option(None, "--json", help="Write the report as JSON"),
):
    """Time size-bounded queries with and without the index over seeded windows."""
    chosen = _variant(variant)
    with _failures():
        report = phase_size_bench(input, chosen, seed, windows, threads, json_path)
    print_size_bench_table(report)


@app.command()
def gen(
    n: int = typer.Option(..., "--n", min=1, help="Node count"),
    m: int = typer.Option(..., "--m", min=0, help="Edge count"),
    cmin: int = typer.Option(2, "--cmin", min=1),
    cmax: int = typer.Option(5, "--cmax", min=1),
    seed: int = typer.Option(..., "--seed", min=0),
    output: str = typer.Option(..., "--output", "-o"),
):
    """Write a seeded random hypergraph dataset."""
    with _failures():
        config = GenConfig(n=n, m=m, cmin=cmin, cmax=cmax, seed=seed)
        count = phase_gen(config, output)
    print_success(f"{count} hyperedges written to [dim]{output}[/dim]")


@app.command()
def scale(
    seed: int = typer.Option(..., "--seed", min=0),
    sizes: str = typer.Option(
        ",".join(str(s) for s in DEFAULT_SCALE_SIZES), "--sizes", help="Comma list of node counts"
    ),
    edges_per_node: int = typer.Option(2, "--edges-per-node", min=1),
    cmin: int = typer.Option(2, "--cmin", min=1),
    cmax: int = typer.Option(5, "--cmax", min=1),
    variants: str = typer.Option("all", "--variants"),
    threads: int = typer.Option(DEFAULT_THREADS, "--threads", min=1),
    json_path: Optional[str] = typer.Option(None, "--json"),
):
    """Per-query time over generated graphs of growing size."""
    chosen = _variants(variants)
    try:
        node_counts = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise typer.BadParameter(f"bad --sizes {sizes!r}") from None
    with _failures():
        points = phase_scale(node_counts, edges_per_node, cmin, cmax, seed, chosen, threads, json_path)
    print_scale_table(points)


def main():
    try:
        app()
    except KeyboardInterrupt:
        console.print("\n[dim]Interrupted.[/dim]")
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        sys.exit(1)
