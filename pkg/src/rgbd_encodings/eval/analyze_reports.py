"""
Comparison tables across encoding variants.

This module provides utilities for:
- Saving and loading MetricsReport rows as CSV
- Converting reports to pandas DataFrames
- Marking the best value of each metric column
- Rendering the comparison as aligned text or as a LaTeX table
- Exporting the comparison by file extension
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from ..dataset.labels import SCORED_CLASSES
from .confusion import MetricsReport

logger = logging.getLogger(__name__)

METRIC_COLUMNS = {
    "overall_accuracy": "Overall Accuracy",
    "mean_avg_precision": "Mean Average Precision",
    "mean_avg_recall": "Mean Average Recall",
}
CONFUSION_SUFFIX = ".confusion.csv"
EXPORT_SUFFIXES = (".csv", ".json", ".tex", ".txt")
_CLASS_NAMES = [label.name.lower() for label in SCORED_CLASSES]


def reports_to_dataframe(reports: Sequence[MetricsReport], per_class: bool = False) -> pd.DataFrame:
    """
    One row per report with the three summary metrics.

    Args:
        reports: Reports to tabulate
        per_class: Also add precision_<class> and recall_<class> columns

    Returns:
        DataFrame indexed from 0 in report order
    """
    rows: list[dict[str, Any]] = []
    for report in reports:
        row: dict[str, Any] = {
            "variant": report.variant,
            "kind": report.kind,
            "source": report.source or "",
            **{column: getattr(report, column) for column in METRIC_COLUMNS},
            "pixel_count": report.pixel_count,
            "excluded_precision": report.excluded_precision,
            "excluded_recall": report.excluded_recall,
        }
        if per_class:
            for name, value in zip(_CLASS_NAMES, report.per_class_precision, strict=False):
                row[f"precision_{name}"] = value
            for name, value in zip(_CLASS_NAMES, report.per_class_recall, strict=False):
                row[f"recall_{name}"] = value
        rows.append(row)
    return pd.DataFrame(rows)


def export_reports_csv(reports: Sequence[MetricsReport], output_path: Path | str) -> Path:
    """
    Write reports, including per-class values, to a CSV file.

    Returns:
        The written path
    """
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    reports_to_dataframe(reports, per_class=True).to_csv(path, index=False)
    logger.info("Wrote %d metrics rows to %s", len(reports), path)
    return path


def _optional_float(value: Any) -> float | None:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return None
    return float(value)


def load_reports_csv(path: Path | str) -> list[MetricsReport]:
    """
    Read reports written by ``export_reports_csv``.

    Returns:
        MetricsReport list in file order

    Raises:
        FileNotFoundError: If the file does not exist
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Metrics file not found: {file_path}")
    df = pd.read_csv(file_path, keep_default_na=True)
    reports = []
    for record in df.to_dict(orient="records"):
        source = record.get("source")
        reports.append(
            MetricsReport(
                variant=str(record["variant"]),
                kind=str(record["kind"]),
                source=None if source is None or (isinstance(source, float) and np.isnan(source)) else str(source),
                overall_accuracy=float(record["overall_accuracy"]),
                mean_avg_precision=float(record["mean_avg_precision"]),
                mean_avg_recall=float(record["mean_avg_recall"]),
                per_class_precision=[_optional_float(record.get(f"precision_{n}")) for n in _CLASS_NAMES],
                per_class_recall=[_optional_float(record.get(f"recall_{n}")) for n in _CLASS_NAMES],
                excluded_precision=int(record["excluded_precision"]),
                excluded_recall=int(record["excluded_recall"]),
                pixel_count=int(record["pixel_count"]),
            )
        )
    return reports


def load_all_reports_from_directory(base_dir: Path | str, pattern: str = "*.csv") -> list[MetricsReport]:
    """
    Load every metrics CSV in a directory, sorted by file name.

    Confusion matrices written alongside (``*.confusion.csv``) are skipped.

    Returns:
        Concatenated MetricsReport list
    """
    directory = Path(base_dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"Metrics directory not found: {directory}")
    reports: list[MetricsReport] = []
    for path in sorted(directory.glob(pattern)):
        if path.name.endswith(CONFUSION_SUFFIX):
            continue
        reports.extend(load_reports_csv(path))
    return reports


def best_mask(df: pd.DataFrame) -> pd.DataFrame:
    """
    True where a row holds the maximum of its metric column; ties are all marked.

    Returns:
        Boolean frame with the METRIC_COLUMNS columns
    """
    marks = {}
    for column in METRIC_COLUMNS:
        values = df[column].to_numpy(dtype=np.float64)
        marks[column] = np.isclose(values, values.max(), rtol=0.0, atol=1e-12)
    return pd.DataFrame(marks, index=df.index)


def _format_metric(value: float, precision: int) -> str:
    """Table cell for a metric fraction in [0, 1]."""
    return f"{float(value):.{precision}f}"


# Variant names come from --variant and may hold any character
_LATEX_ESCAPES = str.maketrans({
    "\\": r"\textbackslash{}",
    "&": r"\&",
    "%": r"\%",
    "$": r"\$",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
})


def _latex_text(text: str) -> str:
    return text.translate(_LATEX_ESCAPES)


def format_text_table(reports: Sequence[MetricsReport], precision: int = 2) -> str:
    """
    Aligned plain-text comparison table; the best value of each column carries a ``*``.

    Returns:
        The table as a string (one line per row, header first)

    Raises:
        ValueError: If reports is empty
    """
    if not reports:
        raise ValueError("Cannot build a table from zero reports")
    df = reports_to_dataframe(reports)
    marks = best_mask(df)

    headers = ["Input Data", *METRIC_COLUMNS.values()]
    rows = []
    for idx in range(len(df)):
        cells = [str(df.iloc[idx]["variant"])]
        for column in METRIC_COLUMNS:
            cell = _format_metric(df.iloc[idx][column], precision)
            cells.append(cell + ("*" if marks.iloc[idx][column] else " "))
        rows.append(cells)

    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) for i in range(len(headers))]
    lines = [
        "  ".join(h.ljust(widths[0]) if i == 0 else h.rjust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for cells in rows:
        lines.append("  ".join(c.ljust(widths[0]) if i == 0 else c.rjust(widths[i]) for i, c in enumerate(cells)))
    return "\n".join(lines)


def create_latex_table(
    reports: Sequence[MetricsReport],
    caption: str = "Classification results for each input encoding, with best results underlined",
    label: str = "tab:encodings",
    precision: int = 2,
) -> str:
    """
    Create a LaTeX table with one row per encoding and the best value of each column underlined.

    Args:
        reports: Reports to tabulate
        caption: Table caption
        label: LaTeX label
        precision: Decimal places

    Returns:
        LaTeX table as a string
    """
    if not reports:
        return _create_empty_latex_table(caption, label)
    df = reports_to_dataframe(reports)
    marks = best_mask(df)

    headers = ["Input Data", *METRIC_COLUMNS.values()]
    col_spec = "l" + "r" * (len(headers) - 1)
    latex = [
        r"\begin{table}[htbp]",
        r"\centering",
        f"\\begin{{tabular}}{{{col_spec}}}",
        r"\hline",
        " & ".join(headers) + r" \\",
        r"\hline",
    ]
    for idx in range(len(df)):
        row = [_latex_text(str(df.iloc[idx]["variant"]))]
        for column in METRIC_COLUMNS:
            cell = _format_metric(df.iloc[idx][column], precision)
            row.append(f"\\underline{{{cell}}}" if marks.iloc[idx][column] else cell)
        latex.append(" & ".join(row) + r" \\")
    latex.extend([
        r"\hline",
        r"\end{tabular}",
        f"\\caption{{{_latex_text(caption)}}}",
        f"\\label{{{label}}}",
        r"\end{table}",
    ])
    return "\n".join(latex)


def _create_empty_latex_table(caption: str, label: str) -> str:
    latex = [
        r"\begin{table}[htbp]",
        r"\centering",
        r"\begin{tabular}{l}",
        r"\hline",
        r"No results \\",
        r"\hline",
        r"\end{tabular}",
        f"\\caption{{{_latex_text(caption)}}}",
        f"\\label{{{label}}}",
        r"\end{table}",
    ]
    return "\n".join(latex)


def export_comparison(reports: Sequence[MetricsReport], output_path: Path | str) -> Path:
    """
    Write the comparison in the format named by the file extension.

    ``.csv`` and ``.json`` hold one record per report with per-class values,
    ``.tex`` the LaTeX table and ``.txt`` the aligned text table.

    Returns:
        The written path

    Raises:
        ValueError: If the extension is not one of these four
    """
    path = Path(output_path)
    suffix = path.suffix.lower()
    if suffix not in EXPORT_SUFFIXES:
        raise ValueError(f"Unsupported comparison format '{suffix}', expected one of {', '.join(EXPORT_SUFFIXES)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if suffix == ".csv":
        reports_to_dataframe(reports, per_class=True).to_csv(path, index=False)
    elif suffix == ".json":
        reports_to_dataframe(reports, per_class=True).to_json(path, orient="records", indent=2)
    elif suffix == ".tex":
        path.write_text(create_latex_table(reports) + "\n", encoding="utf-8")
    else:
        path.write_text(format_text_table(reports) + "\n", encoding="utf-8")
    logger.info("Wrote comparison of %d variants to %s", len(reports), path)
    return path
