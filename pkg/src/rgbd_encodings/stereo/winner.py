"""Winner-take-all selection and post-filtering shared by both matchers."""

from __future__ import annotations

import logging

import numpy as np

from .images import DisparityMap
from .params import MatcherParams

logger = logging.getLogger(__name__)


def select_winners(volume: np.ndarray, d_min: int, uniqueness_ratio: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Pick the lowest-cost disparity per pixel and apply the uniqueness test.

    Ties go to the smallest disparity. A winner survives only if every
    disparity more than one step away costs strictly more than
    best·(1 + uniqueness_ratio/100), so flat cost curves are rejected.

    Returns:
        (integer disparities, validity mask), both (H, W)
    """
    height, width, num_d = volume.shape
    best = np.argmin(volume, axis=2)
    best_cost = np.take_along_axis(volume, best[:, :, None], axis=2)[:, :, 0]

    if num_d > 1:
        ks = np.arange(num_d)[None, None, :]
        near = np.abs(ks - best[:, :, None]) <= 1
        runner_up = np.where(near, np.inf, volume).min(axis=2)
        unique = runner_up > best_cost * (1.0 + uniqueness_ratio / 100.0)
    else:
        unique = np.ones((height, width), dtype=bool)

    disparity = best + d_min
    in_view = np.arange(width)[None, :] - disparity >= 0
    return disparity, unique & in_view


def right_view_disparity(volume: np.ndarray, d_min: int) -> np.ndarray:
    """
    Disparity of each right-image pixel read from the left-referenced volume.

    Right pixel x matches left pixel x + d, so its cost at d is volume[:, x + d, d].

    Returns:
        (H, W) integer disparities for the right view
    """
    height, width, num_d = volume.shape
    right_volume = np.full((height, width, num_d), np.inf, dtype=np.float64)
    for k in range(num_d):
        d = d_min + k
        if d < width:
            right_volume[:, : width - d, k] = volume[:, d:, k]
    return np.argmin(right_volume, axis=2) + d_min


def left_right_check(
    disparity: np.ndarray, valid: np.ndarray, right_disparity: np.ndarray, lr_max_diff: float
) -> np.ndarray:
    """
    Invalidate pixels whose left and right disparities disagree.

    Returns:
        Updated validity mask
    """
    height, width = disparity.shape
    rows = np.arange(height)[:, None]
    target = np.clip(np.arange(width)[None, :] - disparity, 0, width - 1)
    consistent = np.abs(disparity - right_disparity[rows, target]) <= lr_max_diff
    return valid & consistent


def finalize_disparity(volume: np.ndarray, params: MatcherParams) -> DisparityMap:
    """
    Winner-take-all, uniqueness and left-right consistency on an aggregated volume.

    Returns:
        DisparityMap with failing pixels marked invalid
    """
    disparity, valid = select_winners(volume, params.d_min, params.uniqueness_ratio)
    right = right_view_disparity(volume, params.d_min)
    valid = left_right_check(disparity, valid, right, params.lr_max_diff)
    logger.debug("Disparity map: %.1f%% valid", 100.0 * valid.mean())
    return DisparityMap.from_array(disparity, valid, d_min=params.d_min, d_max=params.d_max)
