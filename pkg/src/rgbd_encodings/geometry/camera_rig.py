"""
Pinhole stereo camera model.

Camera frame: +x right, +y down, +z forward. The ground plane is assumed fixed
relative to the camera at ``camera_height_m`` below the optical centre, so with
zero pitch it is the plane ``y = camera_height_m``.
"""

from __future__ import annotations

import hashlib
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import DimensionError, InvalidDisparityError, OutOfRangeError


class Point3(NamedTuple):
    """A 3D point in the camera frame, in meters."""
    x: float
    y: float
    z: float


class CameraRig(BaseModel):
    """
    Intrinsics and mounting of a rectified stereo pair.

    The defaults describe a 480x360 rig with a 400 mm baseline; the focal
    length of 500 px is the one that maps disparities 1..64 to 200..3.125 m.
    """

    model_config = ConfigDict(frozen=True)

    focal_length_px: float = Field(default=500.0, gt=0, description="Focal length in pixels")
    baseline_m: float = Field(default=0.4, gt=0, description="Stereo baseline in meters")
    principal_point: tuple[float, float] = Field(
        default=(239.5, 179.5), description="Principal point (cx, cy) in pixels"
    )
    camera_height_m: float = Field(default=1.5, gt=0, description="Camera height above the ground plane")
    image_size: tuple[int, int] = Field(default=(480, 360), description="Image size (width, height) in pixels")
    pitch_rad: float = Field(default=0.0, description="Downward pitch of the camera relative to the ground")

    @model_validator(mode="after")
    def _principal_point_inside_image(self) -> CameraRig:
        width, height = self.image_size
        if width <= 0 or height <= 0:
            raise ValueError(f"Image size must be positive, got {self.image_size}")
        cx, cy = self.principal_point
        if not (0 <= cx <= width - 1 and 0 <= cy <= height - 1):
            raise ValueError(f"Principal point {self.principal_point} lies outside image {self.image_size}")
        return self

    @property
    def cx(self) -> float:
        return self.principal_point[0]

    @property
    def cy(self) -> float:
        return self.principal_point[1]

    @property
    def width(self) -> int:
        return self.image_size[0]

    @property
    def height(self) -> int:
        return self.image_size[1]

    @property
    def focal_baseline(self) -> float:
        """Product f·B, the depth of a point at unit disparity."""
        return self.focal_length_px * self.baseline_m

    def up_vector(self) -> np.ndarray:
        """World up direction expressed in the camera frame."""
        return np.array([0.0, -math.cos(self.pitch_rad), -math.sin(self.pitch_rad)])

    def depth_range(self, d_min: float = 1.0, d_max: float = 64.0) -> tuple[float, float]:
        """
        Metric depth range covered by a disparity search range.

        Returns:
            (nearest depth, farthest depth) in meters
        """
        return depth_from_disparity(d_max, self), depth_from_disparity(d_min, self)

    def require_image_shape(self, shape: tuple[int, ...]) -> None:
        """
        Check that an (H, W, ...) map was produced for this rig's image size.

        Raises:
            DimensionError: If the leading two dimensions are not (height, width)
        """
        if tuple(shape[:2]) != (self.height, self.width):
            raise DimensionError(f"Map of shape {tuple(shape)} does not match rig image size {self.image_size}")

    def rig_hash(self) -> str:
        """
        Short stable hash of the rig parameters, recorded in container headers.

        Returns:
            First 16 hex characters of the SHA-256 of the canonical JSON
        """
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()[:16]

    @classmethod
    def load(cls, path: Path | str) -> CameraRig:
        """
        Load a rig from its JSON config file.

        Returns:
            The validated CameraRig

        Raises:
            FileNotFoundError: If the file does not exist
        """
        file_path = Path(path)
        if not file_path.exists():
            raise FileNotFoundError(f"Rig config not found: {file_path}")
        return cls.model_validate_json(file_path.read_text(encoding="utf-8"))

    def save(self, path: Path | str) -> None:
        """Write the rig as an indented JSON config file."""
        Path(path).write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")


def depth_from_disparity(d: float, rig: CameraRig) -> float:
    """
    Convert a disparity to depth: z = f·B / d.

    Returns:
        Depth in meters

    Raises:
        InvalidDisparityError: If d is not strictly positive
    """
    if not d > 0:
        raise InvalidDisparityError(f"Disparity must be positive, got {d}")
    return rig.focal_baseline / d


def disparity_from_depth(z: float, rig: CameraRig) -> float:
    """
    Convert a depth back to disparity: d = f·B / z.

    Returns:
        Disparity in pixels

    Raises:
        InvalidDisparityError: If z is not strictly positive
    """
    if not z > 0:
        raise InvalidDisparityError(f"Depth must be positive, got {z}")
    return rig.focal_baseline / z


def reproject_pixel(u: float, v: float, d: float, rig: CameraRig) -> Point3:
    """
    Back-project pixel (u, v) with disparity d into the camera frame.

    Returns:
        The reconstructed Point3

    Raises:
        OutOfRangeError: If (u, v) lies outside the image
    """
    if not (0 <= u <= rig.width - 1 and 0 <= v <= rig.height - 1):
        raise OutOfRangeError(f"Pixel ({u}, {v}) outside image {rig.image_size}")
    z = depth_from_disparity(d, rig)
    x = (u - rig.cx) * z / rig.focal_length_px
    y = (v - rig.cy) * z / rig.focal_length_px
    return Point3(x, y, z)


def point_height(p: Point3, rig: CameraRig) -> float:
    """
    Height of a point above the assumed ground plane.

    Returns:
        h - (y·cos(pitch) + z·sin(pitch)); with zero pitch simply h - y
    """
    up = rig.up_vector()
    return rig.camera_height_m + float(up[1] * p.y + up[2] * p.z)


def reproject_disparity_map(disparity: np.ndarray, valid: np.ndarray, rig: CameraRig) -> np.ndarray:
    """
    Vectorised ``reproject_pixel`` over a whole disparity map.

    Args:
        disparity: (H, W) disparities in pixels
        valid: (H, W) boolean mask; invalid pixels produce NaN points
        rig: Camera rig

    Returns:
        (H, W, 3) float64 array of camera-frame points

    Raises:
        DimensionError: If the map size differs from the rig image size
    """
    rig.require_image_shape(disparity.shape)
    height, width = disparity.shape
    v, u = np.mgrid[0:height, 0:width].astype(np.float64)
    ok = valid & (disparity > 0)
    safe = np.where(ok, disparity, 1.0).astype(np.float64)
    z = rig.focal_baseline / safe
    points = np.stack(
        [
            (u - rig.cx) * z / rig.focal_length_px,
            (v - rig.cy) * z / rig.focal_length_px,
            z,
        ],
        axis=-1,
    )
    points[~ok] = np.nan
    return points


def height_map(points: np.ndarray, rig: CameraRig) -> np.ndarray:
    """
    Vectorised ``point_height`` over an (H, W, 3) point array.

    Returns:
        (H, W) heights in meters (NaN where points are NaN)
    """
    rig.require_image_shape(points.shape)
    up = rig.up_vector()
    return rig.camera_height_m + points[..., 1] * up[1] + points[..., 2] * up[2]
