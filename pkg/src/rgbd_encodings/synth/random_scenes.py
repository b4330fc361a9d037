"""Seeded generator of small off-road scenes covering all six terrain classes."""

from __future__ import annotations

import numpy as np

from ..dataset.labels import ClassLabel
from ..geometry import CameraRig
from .scene_spec import Box, FrontoPlane, GroundPlane, SceneSpec, SlantedPlane, Texture


def _on_ground(x: float, z: float, height: float, rig: CameraRig) -> tuple[float, float, float]:
    """Camera-frame point at lateral x and depth roughly z, lifted to ``height`` above the ground."""
    up = rig.up_vector()
    p = np.array([x, 0.0, z])
    p = p + (height - rig.camera_height_m - float(up @ p)) * up
    return float(p[0]), float(p[1]), float(p[2])


def _ground_patch(
    label: ClassLabel, x: float, z: float, half_x: float, half_z: float, lift: float, seed: int, rig: CameraRig
) -> SlantedPlane:
    return SlantedPlane(
        label=label,
        center=_on_ground(x, z, lift, rig),
        normal=tuple(float(c) for c in rig.up_vector()),
        half_extent=(half_x, half_z),
        texture=Texture(cell_m=0.08, contrast=0.5, seed=seed),
    )


def random_offroad_scene(seed: int, rig: CameraRig, noise_sigma: float = 1.0) -> SceneSpec:
    """
    Build a random scene: a dirt or grass ground, a pond, a patch of the other
    ground type, one to three bushes and one to three trees.

    Object depths are drawn so that every visible surface stays well inside
    disparities 1..64 for rigs with f·B of at least 20.

    Args:
        seed: Seed for object placement, textures and image noise
        rig: Camera rig the scene is rendered with
        noise_sigma: Gaussian intensity noise of the rendered images

    Returns:
        SceneSpec
    """
    rng = np.random.default_rng(seed)
    ground, other = (ClassLabel.DIRT, ClassLabel.GRASS) if rng.random() < 0.5 else (ClassLabel.GRASS, ClassLabel.DIRT)
    far = min(rig.focal_baseline / 1.5, 60.0)

    primitives: list = [
        GroundPlane(label=ground, max_depth_m=far, texture=Texture(cell_m=0.06, contrast=0.6, seed=1)),
        _ground_patch(
            ClassLabel.WATER,
            x=float(rng.uniform(-2.0, 2.0)),
            z=float(rng.uniform(7.0, 12.0)),
            half_x=float(rng.uniform(1.0, 3.0)),
            half_z=float(rng.uniform(1.0, 2.5)),
            lift=0.02,
            seed=2,
            rig=rig,
        ),
        _ground_patch(
            other,
            x=float(rng.uniform(-3.0, 3.0)),
            z=float(rng.uniform(5.0, 9.0)),
            half_x=float(rng.uniform(1.0, 2.5)),
            half_z=float(rng.uniform(0.5, 1.5)),
            lift=0.01,
            seed=3,
            rig=rig,
        ),
    ]

    for k in range(int(rng.integers(1, 4))):
        x = float(rng.uniform(-3.5, 3.5))
        z = float(rng.uniform(6.0, 16.0))
        size = float(rng.uniform(0.8, 1.8))
        top = float(rng.uniform(0.5, 1.2))
        base = _on_ground(x, z, 0.0, rig)
        primitives.append(
            Box(
                label=ClassLabel.BUSH,
                min_corner=(base[0] - size / 2, base[1] - top, base[2] - size / 2),
                max_corner=(base[0] + size / 2, base[1], base[2] + size / 2),
                texture=Texture(cell_m=0.05, contrast=0.7, seed=10 + k),
            )
        )

    for k in range(int(rng.integers(1, 4))):
        z = float(rng.uniform(14.0, min(far - 1.0, 35.0)))
        x = float(rng.uniform(-0.4, 0.4)) * z
        half_width = float(rng.uniform(0.8, 2.5))
        tree_height = float(rng.uniform(4.0, 8.0))
        foot = _on_ground(x, z, 0.0, rig)[1]
        primitives.append(
            FrontoPlane(
                label=ClassLabel.TREE,
                z_m=z,
                x_range=(x - half_width, x + half_width),
                y_range=(foot - tree_height, foot),
                texture=Texture(cell_m=0.15, contrast=0.7, seed=20 + k),
            )
        )

    return SceneSpec(primitives=primitives, seed=seed, noise_sigma=noise_sigma)
