"""
Semi-global block matching.

Per-pixel Birchfield-Tomasi costs are aggregated along 4 or 8 one-dimensional
paths with the recurrence

    L_r(p, d) = C(p, d) + min(L_r(p-r, d), L_r(p-r, d±1) + p1, min_k L_r(p-r, k) + p2) - min_k L_r(p-r, k)

and summed over paths before winner-take-all.
"""

from __future__ import annotations

import logging

import numpy as np

from .images import DisparityMap, GrayImage
from .matching_cost import bt_cost_volume
from .params import SgbmParams
from .winner import finalize_disparity

logger = logging.getLogger(__name__)

# (dx, dy) steps; each path visits p after p - r.
FOUR_PATHS = ((1, 0), (-1, 0), (0, 1), (0, -1))
EIGHT_PATHS = (*FOUR_PATHS, (1, 1), (-1, 1), (1, -1), (-1, -1))


def _path_step(previous: np.ndarray, p1: float, p2: float) -> np.ndarray:
    """
    Smoothness term of the recurrence for one slice of predecessors.

    Args:
        previous: (N, D) path costs at p - r

    Returns:
        (N, D) array to add to the raw cost at p
    """
    floor = previous.min(axis=1, keepdims=True)
    inf_column = np.full((previous.shape[0], 1), np.inf, dtype=previous.dtype)
    lower = np.concatenate([inf_column, previous[:, :-1]], axis=1)
    upper = np.concatenate([previous[:, 1:], inf_column], axis=1)
    best = np.minimum(previous, np.minimum(lower, upper) + previous.dtype.type(p1))
    best = np.minimum(best, floor + previous.dtype.type(p2))
    return best - floor


def _shift_predecessors(previous: np.ndarray, offset: int) -> tuple[np.ndarray, slice]:
    """
    Align predecessors along the slice axis: entry i takes previous[i - offset].

    Returns:
        (aligned predecessors, slice of entries that have one)
    """
    count = previous.shape[0]
    if offset == 0:
        return previous, slice(0, count)
    if offset > 0:
        return previous[: count - offset], slice(offset, count)
    return previous[-offset:], slice(0, count + offset)


def _aggregate_path(cost: np.ndarray, dx: int, dy: int, p1: float, p2: float, total: np.ndarray) -> None:
    """Run one path direction and add its costs into ``total`` in place."""
    height, width, _ = cost.shape
    if dx != 0:
        # Sweep columns; predecessors sit one column back and dy rows away.
        order = range(width) if dx > 0 else range(width - 1, -1, -1)
        previous = None
        for u in order:
            current = cost[:, u, :].copy()
            if previous is not None:
                aligned, rows = _shift_predecessors(previous, dy)
                current[rows] += _path_step(aligned, p1, p2)
            total[:, u, :] += current
            previous = current
    else:
        order = range(height) if dy > 0 else range(height - 1, -1, -1)
        previous = None
        for v in order:
            current = cost[v, :, :].copy()
            if previous is not None:
                current += _path_step(previous, p1, p2)
            total[v, :, :] += current
            previous = current


def aggregate_sgm(cost: np.ndarray, p1: float, p2: float, num_paths: int = 8) -> np.ndarray:
    """
    Sum of path costs S(p, d) over the chosen directions.

    The directions are always processed in the same order so the float32
    sums are reproducible.

    Returns:
        (H, W, D) aggregated volume with the dtype of ``cost``
    """
    paths = EIGHT_PATHS if num_paths == 8 else FOUR_PATHS
    total = np.zeros_like(cost)
    for dx, dy in paths:
        _aggregate_path(cost, dx, dy, p1, p2, total)
    return total


def sgbm_disparity(left: GrayImage, right: GrayImage, params: SgbmParams | None = None) -> DisparityMap:
    """
    Dense disparity by semi-global matching.

    Returns:
        DisparityMap; pixels failing uniqueness or left-right consistency are invalid

    Raises:
        DimensionError: If the images differ in size
    """
    params = params or SgbmParams()
    logger.info(
        "SGBM on %dx%d pair, d=[%d, %d], p1=%s, p2=%s, %d paths",
        left.width, left.height, params.d_min, params.d_max, params.p1, params.p2, params.num_paths,
    )
    cost = bt_cost_volume(left, right, params.d_min, params.d_max)
    aggregated = aggregate_sgm(cost, params.p1, params.p2, params.num_paths)
    return finalize_disparity(aggregated, params)
