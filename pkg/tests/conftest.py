"""Shared fixtures: small rigs and rendered stereo pairs."""

import numpy as np
import pytest

from rgbd_encodings.geometry import CameraRig
from rgbd_encodings.synth import RenderedPair, SceneSpec, fronto_plane_for_disparity, render_scene

FRONTO_DISPARITY = 16


@pytest.fixture
def small_rig() -> CameraRig:
    """128x64 rig with f·B = 40, small enough for the matchers to run quickly."""
    return CameraRig(
        focal_length_px=100.0,
        baseline_m=0.4,
        principal_point=(63.5, 31.5),
        camera_height_m=1.5,
        image_size=(128, 64),
    )


@pytest.fixture
def default_rig() -> CameraRig:
    """The built-in 480x360 rig."""
    return CameraRig()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for random test data."""
    return np.random.default_rng(1234)


def render_fronto(rig: CameraRig, d: float, seed: int = 3, noise_sigma: float = 0.0) -> RenderedPair:
    """Helper to render a bright textured plane at constant disparity, noise-free unless noise_sigma is set."""
    plane = fronto_plane_for_disparity(d, rig, seed=seed, color=(220, 220, 220))
    return render_scene(SceneSpec(primitives=[plane], seed=5, noise_sigma=noise_sigma), rig)


@pytest.fixture
def fronto_pair(small_rig) -> RenderedPair:
    """Plane at disparity 16 filling the whole view."""
    return render_fronto(small_rig, FRONTO_DISPARITY)


@pytest.fixture
def make_fronto(small_rig):
    """Factory for fronto-parallel pairs on the small rig at any disparity."""
    def make(d: float, seed: int = 3, noise_sigma: float = 0.0) -> RenderedPair:
        return render_fronto(small_rig, d, seed, noise_sigma)
    return make
