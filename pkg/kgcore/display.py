from typing import Sequence

from rich.console import Console
from rich.table import Table

from kgcore.models import BenchReport, IndexStats, JaccardReport, ScalePoint, SizeBenchReport

console = Console()


def print_step(label: str, details: dict):
    detail_parts = [f"[dim]{k}:[/dim] [bold]{v}[/bold]" for k, v in details.items()]
    console.print(f"  [green]✓[/green] [bold]{label}[/bold]")
    if detail_parts:
        console.print(f"    {' · '.join(detail_parts)}")


def print_error(message: str):
    console.print(f"  [red]✗[/red] {message}")


def print_success(message: str):
    console.print(f"  [green]✓[/green] {message}")


def print_stats(stats: IndexStats):
    print_step(
        f"{stats.variant.value} index",
        {
            "entries": stats.total_entries,
            "bytes": stats.approx_bytes,
            "leaves": stats.leaf_count,
            "empty": stats.empty_leaf_count,
            "aux": stats.aux_count,
        },
    )


def print_stats_table(stats: IndexStats):
    table = Table(title=f"{stats.variant.value} index", title_style="bold blue", border_style="blue")
    table.add_column("Metric", style="bold cyan")
    table.add_column("Value", style="bold yellow", justify="right")
    table.add_row("Stored entries", str(stats.total_entries))
    table.add_row("Approx. bytes", str(stats.approx_bytes))
    table.add_row("Leaves", str(stats.leaf_count))
    table.add_row("Empty leaves", f"{stats.empty_leaf_count} ({stats.empty_leaf_ratio:.1%})")
    table.add_row("Aux nodes", f"{stats.aux_count} ({stats.aux_leaf_ratio:.1%} of leaves)")
    table.add_row("Mean aux depth", f"{stats.mean_aux_depth:.2f}")
    table.add_row("Mean aux size", f"{stats.mean_aux_size:.2f}")
    console.print(table)


def print_jaccard(report: JaccardReport):
    print_step(
        f"Diagonal Jaccard ({report.mode.value} leaves of the {report.variant.value} index)",
        {"positions": report.count, "mean": f"{report.mean:.4f}"},
    )


def print_bench_table(report: BenchReport):
    table = Table(
        title=f"Benchmark · {report.nodes} nodes · {report.edges} edges · {report.suite_size} queries",
        title_style="bold blue",
        border_style="blue",
    )
    table.add_column("Variant", style="bold cyan")
    table.add_column("Entries", justify="right")
    table.add_column("Build (s)", justify="right")
    table.add_column("Suite (s)", justify="right")
    table.add_column("Speedup", style="bold yellow", justify="right")
    for variant, seconds in report.construction_seconds.items():
        query_seconds = report.query_seconds.get(variant, 0.0)
        speedup = report.peeling_seconds / query_seconds if query_seconds else 0.0
        table.add_row(
            variant,
            str(report.entries.get(variant, 0)),
            f"{seconds:.4f}",
            f"{query_seconds:.4f}",
            f"{speedup:,.0f}×",
        )
    table.add_row("peeling", "—", "—", f"{report.peeling_seconds:.4f}", "1×")
    console.print(table)
    if report.suite_short:
        print_error(f"Only {report.suite_size} nonempty cores; suite is short")


def print_scale_table(points: Sequence[ScalePoint]):
    variants = list(points[0].per_query_seconds) if points else []
    table = Table(title="Per-query seconds (mean of quartile queries)", title_style="bold blue", border_style="blue")
    table.add_column("n", style="bold cyan", justify="right")
    table.add_column("|V|", justify="right")
    table.add_column("|E|", justify="right")
    for variant in variants:
        table.add_column(variant, justify="right")
    table.add_column("peeling", style="bold yellow", justify="right")
    for point in points:
        table.add_row(
            str(point.n),
            str(point.nodes),
            str(point.edges),
            *[f"{point.per_query_seconds[v]:.2e}" for v in variants],
            f"{point.peeling_seconds:.2e}",
        )
    console.print(table)


def print_size_bench_table(report: SizeBenchReport):
    table = Table(
        title=f"Size-bounded queries · {report.variant.value} index vs peeling · seed {report.seed}",
        title_style="bold blue",
        border_style="blue",
    )
    table.add_column("lb", style="bold cyan", justify="right")
    table.add_column("ub", style="bold cyan", justify="right")
    table.add_column("Pairs", justify="right")
    table.add_column("Index (s)", justify="right")
    table.add_column("Peeling (s)", justify="right")
    for window in report.windows:
        table.add_row(
            str(window.lb),
            str(window.ub),
            str(window.pairs),
            f"{window.index_seconds:.2e}",
            f"{window.peeling_seconds:.4f}",
        )
    console.print(table)
    speedup = report.speedup
    print_step(
        "Size-bounded totals",
        {
            "mean pairs": f"{report.mean_pairs:.1f}",
            "index": f"{report.index_seconds:.4f}s",
            "peeling": f"{report.peeling_seconds:.4f}s",
            "speedup": f"{speedup:,.0f}×" if speedup else "—",
        },
    )
