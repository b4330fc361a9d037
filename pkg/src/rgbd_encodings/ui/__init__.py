"""Console output helpers."""

from .visualization import build_class_table, build_report_table, console, display_loss_summary, display_reports

__all__ = [
    "build_class_table",
    "build_report_table",
    "console",
    "display_loss_summary",
    "display_reports",
]
