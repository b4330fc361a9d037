"""
Scalar depth channels: disparity (D), height above ground (H) and angle with gravity (A).

All byte conversions use round-half-up, and invalid pixels always encode as 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from ..errors import DimensionError
from ..geometry import CameraRig, height_map, reproject_disparity_map
from ..stereo.images import DisparityMap

GRAVITY = np.array([0.0, -1.0, 0.0])


@dataclass(frozen=True)
class Channel8:
    """One 8-bit image plane."""

    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.dtype != np.uint8:
            raise DimensionError(
                f"Channel8 needs a 2D uint8 array, got {self.values.dtype} {self.values.shape}"
            )

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def round_half_up(values: np.ndarray) -> np.ndarray:
    """
    Round to the nearest integer, halves upward.

    Returns:
        float array of rounded values
    """
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


def to_channel(fraction: np.ndarray, valid: np.ndarray) -> Channel8:
    """
    Map fractions in [0, 1] to bytes with round(255·x); invalid pixels become 0.

    Returns:
        Channel8
    """
    clamped = np.clip(np.where(valid, fraction, 0.0), 0.0, 1.0)
    return Channel8(round_half_up(255.0 * clamped).astype(np.uint8))


def encode_disparity(dmap: DisparityMap) -> Channel8:
    """
    Linear map of the fixed range [d_min, d_max] onto [0, 255].

    Returns:
        Channel8 (D)
    """
    fraction = (dmap.disparity - dmap.d_min) / (dmap.d_max - dmap.d_min)
    return to_channel(fraction, dmap.valid)


def encode_height(dmap: DisparityMap, rig: CameraRig) -> Channel8:
    """
    Height above the assumed ground plane, clamped to [0, 2h] and scaled to [0, 255].

    Returns:
        Channel8 (H)
    """
    points = reproject_disparity_map(dmap.disparity, dmap.valid, rig)
    heights = height_map(points, rig)
    ceiling = 2.0 * rig.camera_height_m
    fraction = np.clip(np.nan_to_num(heights, nan=0.0), 0.0, ceiling) / ceiling
    return to_channel(fraction, dmap.valid)


def encode_angle_with_gravity(nmap) -> Channel8:
    """
    Dot product of each normal with the fixed gravity vector (0, -1, 0), times 255.

    Downward-facing normals (negative product) clamp to 0.

    Returns:
        Channel8 (A)
    """
    alignment = np.einsum("hwc,c->hw", np.nan_to_num(nmap.normals), GRAVITY)
    return to_channel(np.clip(alignment, 0.0, 1.0), nmap.valid)


def save_channel_png(channel: Channel8, path: Path | str) -> None:
    """Write a channel as an 8-bit grayscale PNG."""
    if not cv2.imwrite(str(path), channel.values):
        raise OSError(f"Failed to write channel: {path}")
