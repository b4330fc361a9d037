"""Surface normals from disparity and their 8-bit encoding (N)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError
from ..geometry import CameraRig, reproject_disparity_map
from ..stereo.images import DisparityMap
from .channels import Channel8, round_half_up


@dataclass(frozen=True)
class NormalMap:
    """Per-pixel unit normals (H, W, 3) facing the camera, with a validity mask."""

    normals: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        if self.normals.ndim != 3 or self.normals.shape[2] != 3:
            raise DimensionError(f"NormalMap needs an (H, W, 3) array, got {self.normals.shape}")
        if self.normals.shape[:2] != self.valid.shape:
            raise DimensionError(f"Normals {self.normals.shape} and mask {self.valid.shape} disagree")

    @property
    def width(self) -> int:
        return self.valid.shape[1]

    @property
    def height(self) -> int:
        return self.valid.shape[0]


def compute_normal_map(dmap: DisparityMap, rig: CameraRig) -> NormalMap:
    """
    Normal of the plane through each pixel's point and its right and down neighbours.

    n = normalize((P(u+1, v) - P(u, v)) x (P(u, v+1) - P(u, v))), flipped so it
    points back toward the camera (n · P < 0). Pixels without valid right and
    down neighbours are invalid.

    Returns:
        NormalMap; invalid pixels hold (0, 0, 0)
    """
    points = reproject_disparity_map(dmap.disparity, dmap.valid, rig)
    height, width = dmap.valid.shape

    valid = np.zeros((height, width), dtype=bool)
    valid[:-1, :-1] = dmap.valid[:-1, :-1] & dmap.valid[:-1, 1:] & dmap.valid[1:, :-1]

    normals = np.zeros((height, width, 3), dtype=np.float64)
    centre = points[:-1, :-1]
    along_u = points[:-1, 1:] - centre
    along_v = points[1:, :-1] - centre
    cross = np.cross(along_u, along_v)
    length = np.linalg.norm(cross, axis=-1)

    inner = valid[:-1, :-1] & (length > 0)
    unit = np.zeros_like(cross)
    unit[inner] = cross[inner] / length[inner, None]
    facing_away = np.einsum("hwc,hwc->hw", np.nan_to_num(unit), np.nan_to_num(centre)) > 0
    unit[facing_away] *= -1.0

    normals[:-1, :-1] = unit
    valid[:-1, :-1] = inner
    normals[~valid] = 0.0
    return NormalMap(normals=normals, valid=valid)


def encode_normals(nmap: NormalMap) -> tuple[Channel8, Channel8, Channel8]:
    """
    Map each signed component to a byte with round(255·(n + 1)/2).

    Returns:
        (N_x, N_y, N_z) channels; invalid pixels are (0, 0, 0)
    """
    fraction = np.clip((nmap.normals + 1.0) / 2.0, 0.0, 1.0)
    encoded = round_half_up(255.0 * fraction).astype(np.uint8)
    encoded[~nmap.valid] = 0
    return (
        Channel8(np.ascontiguousarray(encoded[:, :, 0])),
        Channel8(np.ascontiguousarray(encoded[:, :, 1])),
        Channel8(np.ascontiguousarray(encoded[:, :, 2])),
    )
