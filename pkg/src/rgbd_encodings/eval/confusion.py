"""
Segmentation scoring from a confusion matrix.

Rows are ground-truth classes and columns predictions. Ground-truth pixels
with the ignore label are not counted anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..dataset.labels import NUM_CLASSES, SCORED_CLASSES, ClassLabel, LabelMap
from ..errors import DimensionError, UndefinedMetricError


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[g, p] = pixels of ground-truth class g predicted as p."""

    counts: np.ndarray

    def __post_init__(self):
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise DimensionError(f"Confusion matrix must be square, got {self.counts.shape}")
        if np.any(self.counts < 0):
            raise ValueError("Confusion matrix counts must be non-negative")

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        if other.counts.shape != self.counts.shape:
            raise DimensionError(f"Cannot add {self.counts.shape} and {other.counts.shape} matrices")
        return ConfusionMatrix(self.counts + other.counts)

    @classmethod
    def empty(cls, num_classes: int = NUM_CLASSES) -> ConfusionMatrix:
        return cls(np.zeros((num_classes, num_classes), dtype=np.int64))


def confusion_matrix(pred: LabelMap, gt: LabelMap, num_classes: int = NUM_CLASSES) -> ConfusionMatrix:
    """
    Tally predictions against ground truth.

    Returns:
        ConfusionMatrix over the scored classes

    Raises:
        DimensionError: If the label maps differ in size
        ValueError: If a scored pixel has a prediction outside the class range
    """
    if pred.labels.shape != gt.labels.shape:
        raise DimensionError(f"Prediction {pred.labels.shape} and ground truth {gt.labels.shape} differ in size")
    scored = gt.labels != ClassLabel.IGNORE
    g = gt.labels[scored].astype(np.int64)
    p = pred.labels[scored].astype(np.int64)
    if np.any(p >= num_classes) or np.any(g >= num_classes):
        raise ValueError(f"Class ids must be below {num_classes} on scored pixels")
    counts = np.bincount(g * num_classes + p, minlength=num_classes * num_classes)
    return ConfusionMatrix(counts.reshape(num_classes, num_classes).astype(np.int64))


def overall_accuracy(cm: ConfusionMatrix) -> float:
    """
    Correctly labelled pixels over all labelled pixels.

    Raises:
        UndefinedMetricError: If the matrix is empty
    """
    if cm.total == 0:
        raise UndefinedMetricError("Overall accuracy of an empty confusion matrix is undefined")
    return float(np.trace(cm.counts) / cm.total)


def per_class_precision_recall(cm: ConfusionMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-class precision (diagonal over column sums) and recall (over row sums).

    Returns:
        (precision, recall) arrays with NaN where the denominator is zero
    """
    diagonal = np.diag(cm.counts).astype(np.float64)
    predicted = cm.counts.sum(axis=0).astype(np.float64)
    actual = cm.counts.sum(axis=1).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(predicted > 0, diagonal / predicted, np.nan)
        recall = np.where(actual > 0, diagonal / actual, np.nan)
    return precision, recall


def mean_avg_precision_recall(cm: ConfusionMatrix) -> tuple[float, float]:
    """
    Unweighted means of the defined per-class precision and recall values.

    Classes with a zero denominator are left out of the corresponding mean.

    Returns:
        (mean average precision, mean average recall)

    Raises:
        UndefinedMetricError: If the matrix is empty
    """
    if cm.total == 0:
        raise UndefinedMetricError("Precision and recall of an empty confusion matrix are undefined")
    precision, recall = per_class_precision_recall(cm)
    return float(np.nanmean(precision)), float(np.nanmean(recall))


def _optional(values: np.ndarray) -> list[float | None]:
    return [None if np.isnan(v) else float(v) for v in values]


class MetricsReport(BaseModel):
    """The scores of one encoding variant."""

    variant: str = Field(description="Table label, e.g. 'RGBH (SGBM)'")
    kind: str = Field(description="Encoding kind value, e.g. 'rgbh'")
    source: str | None = Field(default=None, description="Stereo algorithm of the depth channels")
    overall_accuracy: float = Field(ge=0, le=1)
    mean_avg_precision: float = Field(ge=0, le=1)
    mean_avg_recall: float = Field(ge=0, le=1)
    per_class_precision: list[float | None] = Field(description="Precision per class; None where undefined")
    per_class_recall: list[float | None] = Field(description="Recall per class; None where undefined")
    excluded_precision: int = Field(ge=0, description="Classes left out of the precision mean")
    excluded_recall: int = Field(ge=0, description="Classes left out of the recall mean")
    pixel_count: int = Field(ge=0, description="Scored pixels")

    @field_validator("per_class_precision", "per_class_recall")
    @classmethod
    def _fractions(cls, values: list[float | None]) -> list[float | None]:
        for value in values:
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"Per-class value {value} outside [0, 1]")
        return values

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix, variant: str, kind: str, source: str | None = None) -> MetricsReport:
        """
        Compute every score from a confusion matrix.

        Returns:
            MetricsReport

        Raises:
            UndefinedMetricError: If the matrix is empty
        """
        precision, recall = per_class_precision_recall(cm)
        mean_precision, mean_recall = mean_avg_precision_recall(cm)
        return cls(
            variant=variant,
            kind=kind,
            source=source,
            overall_accuracy=overall_accuracy(cm),
            mean_avg_precision=mean_precision,
            mean_avg_recall=mean_recall,
            per_class_precision=_optional(precision),
            per_class_recall=_optional(recall),
            excluded_precision=int(np.isnan(precision).sum()),
            excluded_recall=int(np.isnan(recall).sum()),
            pixel_count=cm.total,
        )

    @property
    def class_names(self) -> list[str]:
        return [label.name.lower() for label in SCORED_CLASSES[: len(self.per_class_precision)]]
