"""Procedural surface textures evaluated in closed form at surface coordinates."""

from __future__ import annotations

import numpy as np

from .scene_spec import Texture

_M1 = np.uint64(0x9E3779B97F4A7C15)
_M2 = np.uint64(0xC2B2AE3D27D4EB4F)
_M3 = np.uint64(0x165667B19E3779F9)
_MIX1 = np.uint64(0xFF51AFD7ED558CCD)
_MIX2 = np.uint64(0xC4CEB9FE1A85EC53)


def lattice_noise(i: np.ndarray, j: np.ndarray, seed: int) -> np.ndarray:
    """
    Deterministic uniform value in [0, 1) for each integer lattice point.

    Returns:
        float64 array shaped like i
    """
    with np.errstate(over="ignore"):
        x = i.astype(np.int64).astype(np.uint64) * _M1
        x ^= j.astype(np.int64).astype(np.uint64) * _M2
        x ^= np.uint64(seed & 0xFFFFFFFFFFFFFFFF) * _M3
        x ^= x >> np.uint64(33)
        x *= _MIX1
        x ^= x >> np.uint64(33)
        x *= _MIX2
        x ^= x >> np.uint64(33)
    return (x >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def sample_texture(texture: Texture, s: np.ndarray, t: np.ndarray, seed: int) -> np.ndarray:
    """
    Texture value in [0, 1] at surface coordinates (s, t) in meters.

    Noise is bilinearly interpolated between lattice values so every view of
    the same surface point gets the same value.

    Returns:
        float64 array shaped like s
    """
    a = s / texture.cell_m
    b = t / texture.cell_m
    if texture.kind == "checker":
        return ((np.floor(a) + np.floor(b)) % 2).astype(np.float64)

    i0 = np.floor(a)
    j0 = np.floor(b)
    fa = a - i0
    fb = b - j0
    combined = seed * 1_000_003 + texture.seed
    n00 = lattice_noise(i0, j0, combined)
    n10 = lattice_noise(i0 + 1, j0, combined)
    n01 = lattice_noise(i0, j0 + 1, combined)
    n11 = lattice_noise(i0 + 1, j0 + 1, combined)
    top = n00 * (1 - fa) + n10 * fa
    bottom = n01 * (1 - fa) + n11 * fa
    return top * (1 - fb) + bottom * fb
