"""Pinhole stereo geometry: disparity/depth conversion and ground-plane heights."""

from .camera_rig import (
    CameraRig,
    Point3,
    depth_from_disparity,
    disparity_from_depth,
    height_map,
    point_height,
    reproject_disparity_map,
    reproject_pixel,
)

__all__ = [
    "CameraRig",
    "Point3",
    "depth_from_disparity",
    "disparity_from_depth",
    "height_map",
    "point_height",
    "reproject_disparity_map",
    "reproject_pixel",
]
