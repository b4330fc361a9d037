"""
Image and disparity map types for stereo matching, with PNG input/output.

Disparity PNGs are 16-bit with the value round(d·256); 0 is reserved for
invalid pixels.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from ..errors import DimensionError

logger = logging.getLogger(__name__)

DISPARITY_PNG_SCALE = 256.0
INVALID_DISPARITY = 0.0


@dataclass(frozen=True)
class GrayImage:
    """8-bit luminance image, row-major (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 2:
            raise DimensionError(f"GrayImage needs a 2D array, got shape {self.pixels.shape}")
        if self.pixels.dtype != np.uint8:
            raise DimensionError(f"GrayImage needs uint8 pixels, got {self.pixels.dtype}")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class DisparityMap:
    """
    Per-pixel disparity with a validity mask.

    Invalid pixels carry the sentinel disparity 0.
    """

    disparity: np.ndarray
    valid: np.ndarray
    d_min: float = 1.0
    d_max: float = 64.0

    def __post_init__(self):
        if self.disparity.shape != self.valid.shape or self.disparity.ndim != 2:
            raise DimensionError(
                f"Disparity {self.disparity.shape} and mask {self.valid.shape} must be equal 2D shapes"
            )
        if self.valid.dtype != np.bool_:
            raise DimensionError(f"Validity mask must be boolean, got {self.valid.dtype}")
        inside = (self.disparity >= self.d_min) & (self.disparity <= self.d_max)
        if np.any(self.valid & ~inside):
            raise DimensionError(f"Valid disparities must lie in [{self.d_min}, {self.d_max}]")

    @property
    def width(self) -> int:
        return self.disparity.shape[1]

    @property
    def height(self) -> int:
        return self.disparity.shape[0]

    @classmethod
    def from_array(cls, disparity: np.ndarray, valid: np.ndarray, d_min: float = 1.0, d_max: float = 64.0):
        """
        Build a map, writing the invalid sentinel into masked-out pixels.

        Returns:
            DisparityMap with float64 disparities
        """
        values = np.where(valid, disparity, INVALID_DISPARITY).astype(np.float64)
        return cls(disparity=values, valid=valid.astype(bool), d_min=d_min, d_max=d_max)


def to_gray(rgb: np.ndarray) -> GrayImage:
    """
    Convert an RGB image to luminance with BT.601 weights (0.299, 0.587, 0.114).

    Returns:
        GrayImage of the same size
    """
    if rgb.ndim == 2:
        return GrayImage(rgb.astype(np.uint8))
    return GrayImage(cv2.cvtColor(rgb.astype(np.uint8), cv2.COLOR_RGB2GRAY))


def load_rgb_image(path: Path | str) -> np.ndarray:
    """
    Read an 8-bit PNG as an RGB array; grayscale files are expanded to 3 channels.

    Returns:
        (H, W, 3) uint8 array

    Raises:
        FileNotFoundError: If the file is missing or unreadable
    """
    image = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if image is None:
        raise FileNotFoundError(f"Image not found or unreadable: {path}")
    if image.ndim == 2:
        return cv2.cvtColor(image, cv2.COLOR_GRAY2RGB)
    if image.shape[2] == 4:
        image = image[:, :, :3]
    return cv2.cvtColor(image, cv2.COLOR_BGR2RGB)


def load_gray_image(path: Path | str) -> GrayImage:
    """
    Read a PNG as luminance.

    Returns:
        GrayImage
    """
    return to_gray(load_rgb_image(path))


def save_rgb_image(rgb: np.ndarray, path: Path | str) -> None:
    """Write an RGB (or single-channel) uint8 array as PNG."""
    array = rgb if rgb.ndim == 2 else cv2.cvtColor(rgb, cv2.COLOR_RGB2BGR)
    if not cv2.imwrite(str(path), array):
        raise OSError(f"Failed to write image: {path}")


def save_disparity_png(dmap: DisparityMap, path: Path | str) -> None:
    """Write a disparity map as 16-bit PNG storing round(d·256), 0 for invalid."""
    scaled = np.floor(dmap.disparity * DISPARITY_PNG_SCALE + 0.5)
    encoded = np.where(dmap.valid, np.clip(scaled, 1, np.iinfo(np.uint16).max), 0).astype(np.uint16)
    if not cv2.imwrite(str(path), encoded):
        raise OSError(f"Failed to write disparity: {path}")
    logger.debug("Wrote disparity map %s (%d valid pixels)", path, int(dmap.valid.sum()))


def load_disparity_png(path: Path | str, d_min: float = 1.0, d_max: float = 64.0) -> DisparityMap:
    """
    Read a 16-bit disparity PNG written by ``save_disparity_png``.

    Returns:
        DisparityMap

    Raises:
        FileNotFoundError: If the file is missing or unreadable
    """
    encoded = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if encoded is None:
        raise FileNotFoundError(f"Disparity PNG not found or unreadable: {path}")
    disparity = encoded.astype(np.float64) / DISPARITY_PNG_SCALE
    valid = (encoded > 0) & (disparity >= d_min) & (disparity <= d_max)
    return DisparityMap.from_array(disparity, valid, d_min=d_min, d_max=d_max)


def save_disparity_visualization(dmap: DisparityMap, path: Path | str) -> None:
    """Write an 8-bit false-colour rendering of a disparity map (invalid pixels black)."""
    span = dmap.d_max - dmap.d_min
    normalised = np.where(dmap.valid, (dmap.disparity - dmap.d_min) / span * 255.0, 0.0)
    colored = cv2.applyColorMap(normalised.astype(np.uint8), cv2.COLORMAP_JET)
    colored[~dmap.valid] = 0
    if not cv2.imwrite(str(path), colored):
        raise OSError(f"Failed to write visualization: {path}")
