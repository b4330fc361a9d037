"""
Adaptive support weight matching.

Each support-window pixel q contributes its truncated absolute-difference cost
weighted by how similar in intensity and how close it is to the centre pixel,
in both the left window and the corresponding right window. There is no
global smoothness term.

The window is sampled on a grid of ``window_stride`` pixels through the
centre; stride 1 visits every window pixel.
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .images import DisparityMap, GrayImage
from .matching_cost import tad_cost_volume
from .params import AswParams
from .winner import finalize_disparity

logger = logging.getLogger(__name__)


def asw_support_weight(delta_color, delta_spatial, params: AswParams):
    """
    Support weight exp(-(delta_color/gamma_color + delta_spatial/gamma_spatial)).

    Works on scalars and on numpy arrays.

    Returns:
        Weight in (0, 1]
    """
    return np.exp(-(np.asarray(delta_color) / params.gamma_color + np.asarray(delta_spatial) / params.gamma_spatial))


def window_offsets(radius: int, stride: int = 1) -> list[tuple[int, int]]:
    """
    Row-major (dy, dx) support offsets on a stride grid through the centre.

    The fixed order keeps the float sums reproducible.
    """
    steps = range(-(radius // stride) * stride, radius + 1, stride)
    return [(dy, dx) for dy in steps for dx in steps]


def _at_disparities(plane: np.ndarray, d_min: int, d_max: int) -> np.ndarray:
    """
    (H, W, D) view of a right-image plane at column u - d, clamped at column 0.

    Windows over the mirrored, left-padded plane keep the disparity axis
    contiguous without materialising the volume.
    """
    width = plane.shape[1]
    mirrored = np.ascontiguousarray(np.pad(plane, ((0, 0), (d_max, 0)), mode="edge")[:, ::-1])
    windows = sliding_window_view(mirrored, d_max - d_min + 1, axis=1)
    return windows[:, d_min:width + d_min][:, ::-1]


def aggregate_asw(left: GrayImage, right: GrayImage, params: AswParams) -> np.ndarray:
    """
    Weighted window average of the raw cost for every pixel and disparity.

    Window pixels outside the left image get zero weight; right-window pixels
    left of the image reuse column 0.

    Returns:
        (H, W, D) float32 aggregated volume

    Raises:
        DimensionError: If the images differ in size
    """
    cost = tad_cost_volume(left, right, params.d_min, params.d_max, params.truncation)
    height, width, _ = cost.shape
    r = params.window_radius
    il = left.pixels.astype(np.float32)
    ir = right.pixels.astype(np.float32)

    pad = ((r, r), (r, r))
    il_pad = np.pad(il, pad, mode="edge")
    ir_pad = np.pad(ir, pad, mode="edge")
    inside_pad = np.pad(np.ones((height, width), dtype=np.float32), pad)
    cost_pad = np.pad(cost, (*pad, (0, 0)), mode="edge")

    numerator = np.zeros_like(cost)
    denominator = np.zeros_like(cost)
    weight = np.empty_like(cost)
    for dy, dx in window_offsets(r, params.window_stride):
        rows = slice(r + dy, r + dy + height)
        columns = slice(r + dx, r + dx + width)
        spatial = float(np.hypot(dy, dx))
        w_left = asw_support_weight(np.abs(il - il_pad[rows, columns]), spatial, params).astype(np.float32)
        w_left *= inside_pad[rows, columns]
        # Right-window weights live in right coordinates, so they are read at u - d.
        w_right = asw_support_weight(np.abs(ir - ir_pad[rows, columns]), spatial, params).astype(np.float32)
        np.multiply(w_left[:, :, None], _at_disparities(w_right, params.d_min, params.d_max), out=weight)
        denominator += weight
        weight *= cost_pad[rows, columns, :]
        numerator += weight
    return numerator / np.maximum(denominator, np.float32(1e-12))


def asw_disparity(left: GrayImage, right: GrayImage, params: AswParams | None = None) -> DisparityMap:
    """
    Dense disparity by adaptive support weight aggregation.

    Returns:
        DisparityMap; pixels failing uniqueness or left-right consistency are invalid

    Raises:
        DimensionError: If the images differ in size
    """
    params = params or AswParams()
    logger.info(
        "ASW on %dx%d pair, d=[%d, %d], radius=%d, stride=%d, gamma_c=%s, gamma_s=%s",
        left.width, left.height, params.d_min, params.d_max,
        params.window_radius, params.window_stride, params.gamma_color, params.gamma_spatial,
    )
    aggregated = aggregate_asw(left, right, params)
    return finalize_disparity(aggregated, params)
