"""
Per-pixel matching costs.

Cost volumes are laid out (height, width, disparity) with disparity index k
standing for d = d_min + k. Matches that fall left of the right image reuse
the right image's first column; winners that point there are invalidated
later by ``winner.select_winners``.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..errors import DimensionError, OutOfRangeError
from .images import GrayImage


def _half_pixel_bounds(row: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Min and max of each sample and its two half-pixel interpolants along the last axis.

    Returns:
        (minimum, maximum) arrays shaped like row
    """
    left = np.concatenate([row[..., :1], row[..., :-1]], axis=-1)
    right = np.concatenate([row[..., 1:], row[..., -1:]], axis=-1)
    minus = 0.5 * (row + left)
    plus = 0.5 * (row + right)
    lower = np.minimum(np.minimum(minus, plus), row)
    upper = np.maximum(np.maximum(minus, plus), row)
    return lower, upper


def bt_cost(left_row: Sequence[float], right_row: Sequence[float], u: int, d: int) -> float:
    """
    Birchfield-Tomasi dissimilarity between left pixel u and right pixel u - d.

    Each side is compared against the interval spanned by the other side's
    sample and its linearly interpolated half-pixel neighbours; the symmetric
    cost is the smaller of the two distances.

    Returns:
        Non-negative cost

    Raises:
        OutOfRangeError: If u or u - d falls outside the rows
    """
    left = np.asarray(left_row, dtype=np.float64)
    right = np.asarray(right_row, dtype=np.float64)
    xr = u - d
    if not (0 <= u < left.size and 0 <= xr < right.size):
        raise OutOfRangeError(f"Match ({u}, {xr}) outside rows of length {left.size}/{right.size}")

    left_min, left_max = _half_pixel_bounds(left)
    right_min, right_max = _half_pixel_bounds(right)
    from_left = max(0.0, left[u] - right_max[xr], right_min[xr] - left[u])
    from_right = max(0.0, right[xr] - left_max[u], left_min[u] - right[xr])
    return float(min(from_left, from_right))


def right_columns(width: int, d_min: int, d_max: int) -> np.ndarray:
    """
    Right-image column for every (u, disparity index), clamped to the image.

    Returns:
        (width, num_disparities) int array
    """
    u = np.arange(width)[:, None]
    d = np.arange(d_min, d_max + 1)[None, :]
    return np.clip(u - d, 0, width - 1)


def _check_pair(left: GrayImage, right: GrayImage) -> None:
    if left.pixels.shape != right.pixels.shape:
        raise DimensionError(f"Stereo pair sizes differ: {left.pixels.shape} vs {right.pixels.shape}")


def bt_cost_volume(left: GrayImage, right: GrayImage, d_min: int = 1, d_max: int = 64) -> np.ndarray:
    """
    Birchfield-Tomasi cost for every pixel and disparity.

    Returns:
        (H, W, D) float32 volume; all values are multiples of 0.5

    Raises:
        DimensionError: If the images differ in size
    """
    _check_pair(left, right)
    il = left.pixels.astype(np.float32)
    ir = right.pixels.astype(np.float32)
    il_min, il_max = _half_pixel_bounds(il)
    ir_min, ir_max = _half_pixel_bounds(ir)

    cols = right_columns(left.width, d_min, d_max)
    il3 = il[:, :, None]
    ir3 = ir[:, cols]
    from_left = np.maximum(np.maximum(il3 - ir_max[:, cols], ir_min[:, cols] - il3), 0.0)
    from_right = np.maximum(np.maximum(ir3 - il_max[:, :, None], il_min[:, :, None] - ir3), 0.0)
    return np.minimum(from_left, from_right).astype(np.float32)


def tad_cost_volume(
    left: GrayImage, right: GrayImage, d_min: int = 1, d_max: int = 64, truncation: float = 40.0
) -> np.ndarray:
    """
    Truncated absolute intensity difference for every pixel and disparity.

    Returns:
        (H, W, D) float32 volume

    Raises:
        DimensionError: If the images differ in size
    """
    _check_pair(left, right)
    il = left.pixels.astype(np.float32)
    ir = right.pixels.astype(np.float32)
    cols = right_columns(left.width, d_min, d_max)
    return np.minimum(np.abs(il[:, :, None] - ir[:, cols]), np.float32(truncation))
