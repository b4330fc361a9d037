"""
Console rendering of metrics and run summaries.

This module provides functions for displaying results using rich formatting.
"""

from __future__ import annotations

from collections.abc import Sequence

from rich.console import Console
from rich.table import Table
from rich.text import Text

from ..eval.analyze_reports import METRIC_COLUMNS, best_mask, reports_to_dataframe
from ..eval.confusion import MetricsReport

console = Console(width=120)


def build_report_table(reports: Sequence[MetricsReport], precision: int = 2) -> Table:
    """
    Rich table with one row per encoding variant; best values are underlined.

    Args:
        reports: Reports to show
        precision: Decimal places

    Returns:
        The rich Table
    """
    table = Table(title="Classification Results", show_header=True, header_style="bold magenta")
    table.add_column("Input Data", style="cyan")
    for header in METRIC_COLUMNS.values():
        table.add_column(header, justify="right")

    if not reports:
        return table
    df = reports_to_dataframe(reports)
    marks = best_mask(df)
    for idx in range(len(df)):
        cells: list[str | Text] = [str(df.iloc[idx]["variant"])]
        for column in METRIC_COLUMNS:
            value = f"{float(df.iloc[idx][column]):.{precision}f}"
            cells.append(Text(value, style="bold underline green") if marks.iloc[idx][column] else Text(value))
        table.add_row(*cells)
    return table


def build_class_table(report: MetricsReport, precision: int = 2) -> Table:
    """Per-class precision and recall of one report; undefined values show as '-'."""
    table = Table(title=f"Per-class scores: {report.variant}", show_header=True, header_style="bold magenta")
    table.add_column("Class", style="cyan")
    table.add_column("Precision", justify="right")
    table.add_column("Recall", justify="right")
    for name, p, r in zip(report.class_names, report.per_class_precision, report.per_class_recall, strict=False):
        table.add_row(
            name,
            "-" if p is None else f"{p:.{precision}f}",
            "-" if r is None else f"{r:.{precision}f}",
        )
    return table


def display_reports(
    reports: Sequence[MetricsReport], per_class: bool = False, console_instance: Console | None = None
) -> None:
    """Print the comparison table, and optionally each report's per-class table."""
    output_console = console_instance or console
    output_console.print(build_report_table(reports))
    if per_class:
        for report in reports:
            output_console.print(build_class_table(report))


def display_loss_summary(losses: Sequence[float], console_instance: Console | None = None) -> None:
    """Print first, last and minimum training loss."""
    output_console = console_instance or console
    if not losses:
        output_console.print("[yellow]No training iterations were run[/yellow]")
        return
    table = Table(title="Training Loss", show_header=True, header_style="bold magenta")
    table.add_column("Iterations", justify="right", style="cyan")
    table.add_column("First", justify="right")
    table.add_column("Last", justify="right")
    table.add_column("Minimum", justify="right", style="green")
    table.add_row(str(len(losses)), f"{losses[0]:.4f}", f"{losses[-1]:.4f}", f"{min(losses):.4f}")
    output_console.print(table)
