"""Scoring of disparity maps against ground truth."""

from __future__ import annotations

from typing import NamedTuple

import cv2
import numpy as np

from ..errors import DimensionError, UndefinedMetricError
from ..stereo.images import DisparityMap


class DisparityAccuracy(NamedTuple):
    bad_pixel_rate: float
    mean_abs_error: float
    coverage: float
    evaluated: int


def _scored(dmap: DisparityMap, gt: DisparityMap, occluded: np.ndarray | None) -> np.ndarray:
    if dmap.disparity.shape != gt.disparity.shape:
        raise DimensionError(f"Disparity {dmap.disparity.shape} and ground truth {gt.disparity.shape} differ")
    reference = gt.valid.copy()
    if occluded is not None:
        reference &= ~occluded
    return reference


def _accuracy(dmap: DisparityMap, gt: DisparityMap, reference: np.ndarray, tolerance: float) -> DisparityAccuracy:
    evaluated = reference & dmap.valid
    count = int(evaluated.sum())
    if count == 0:
        raise UndefinedMetricError("No valid, non-occluded pixels to score")
    error = np.abs(dmap.disparity[evaluated] - gt.disparity[evaluated])
    return DisparityAccuracy(
        bad_pixel_rate=float((error > tolerance).mean()),
        mean_abs_error=float(error.mean()),
        coverage=count / int(reference.sum()),
        evaluated=count,
    )


def disparity_accuracy(
    dmap: DisparityMap, gt: DisparityMap, occluded: np.ndarray | None = None, tolerance: float = 1.0
) -> DisparityAccuracy:
    """
    Error statistics over non-occluded ground-truth pixels the matcher kept.

    Args:
        dmap: Estimated disparity
        gt: Ground-truth disparity
        occluded: Pixels to leave out (e.g. the renderer's occlusion mask)
        tolerance: Errors above this many pixels count as bad

    Returns:
        DisparityAccuracy; coverage is the share of scorable pixels the matcher kept

    Raises:
        UndefinedMetricError: If no pixel can be scored
    """
    return _accuracy(dmap, gt, _scored(dmap, gt, occluded), tolerance)


def depth_edge_mask(gt: DisparityMap, band: int = 2, jump: float = 1.0) -> np.ndarray:
    """
    Pixels within ``band`` pixels of a ground-truth disparity discontinuity.

    A discontinuity is a jump above ``jump`` pixels between 4-neighbours, or a
    boundary between valid and invalid ground truth.

    Returns:
        (H, W) boolean mask
    """
    d = np.where(gt.valid, gt.disparity, 0.0)
    edges = np.zeros(d.shape, dtype=bool)
    horizontal = (np.abs(np.diff(d, axis=1)) > jump) | (gt.valid[:, 1:] != gt.valid[:, :-1])
    vertical = (np.abs(np.diff(d, axis=0)) > jump) | (gt.valid[1:, :] != gt.valid[:-1, :])
    edges[:, 1:] |= horizontal
    edges[:, :-1] |= horizontal
    edges[1:, :] |= vertical
    edges[:-1, :] |= vertical
    if band <= 0:
        return edges
    kernel = np.ones((2 * band + 1, 2 * band + 1), dtype=np.uint8)
    return cv2.dilate(edges.astype(np.uint8), kernel).astype(bool)


def edge_band_accuracy(
    dmap: DisparityMap,
    gt: DisparityMap,
    occluded: np.ndarray | None = None,
    band: int = 2,
    tolerance: float = 1.0,
) -> DisparityAccuracy:
    """
    ``disparity_accuracy`` restricted to the band around depth discontinuities.

    Returns:
        DisparityAccuracy over the band; coverage is relative to the scorable band pixels

    Raises:
        UndefinedMetricError: If the band holds no scorable pixel
    """
    reference = _scored(dmap, gt, occluded) & depth_edge_mask(gt, band)
    if not reference.any():
        raise UndefinedMetricError("No scorable pixels near depth edges")
    return _accuracy(dmap, gt, reference, tolerance)
