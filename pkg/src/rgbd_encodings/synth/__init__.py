"""Synthetic stereo scenes with exact ground truth."""

from .random_scenes import random_offroad_scene
from .renderer import GroundTruth, RenderedPair, fronto_plane_for_disparity, render_scene, save_fixture
from .scene_spec import Box, FrontoPlane, GroundPlane, SceneSpec, SlantedPlane, Texture
from .texture import lattice_noise, sample_texture

__all__ = [
    "Box",
    "FrontoPlane",
    "GroundPlane",
    "GroundTruth",
    "RenderedPair",
    "SceneSpec",
    "SlantedPlane",
    "Texture",
    "fronto_plane_for_disparity",
    "lattice_noise",
    "random_offroad_scene",
    "render_scene",
    "sample_texture",
    "save_fixture",
]
