"""Segmentation and disparity scoring plus comparison tables."""

from .analyze_reports import (
    CONFUSION_SUFFIX,
    METRIC_COLUMNS,
    best_mask,
    create_latex_table,
    export_comparison,
    export_reports_csv,
    format_text_table,
    load_all_reports_from_directory,
    load_reports_csv,
    reports_to_dataframe,
)
from .confusion import (
    ConfusionMatrix,
    MetricsReport,
    confusion_matrix,
    mean_avg_precision_recall,
    overall_accuracy,
    per_class_precision_recall,
)
from .stereo_accuracy import DisparityAccuracy, depth_edge_mask, disparity_accuracy, edge_band_accuracy

__all__ = [
    "CONFUSION_SUFFIX",
    "METRIC_COLUMNS",
    "ConfusionMatrix",
    "DisparityAccuracy",
    "MetricsReport",
    "best_mask",
    "confusion_matrix",
    "create_latex_table",
    "depth_edge_mask",
    "disparity_accuracy",
    "edge_band_accuracy",
    "export_comparison",
    "export_reports_csv",
    "format_text_table",
    "load_all_reports_from_directory",
    "load_reports_csv",
    "mean_avg_precision_recall",
    "overall_accuracy",
    "per_class_precision_recall",
    "reports_to_dataframe",
]
