"""
Ray-casting renderer for synthetic rectified stereo pairs with exact ground truth.

Each primitive is reduced to one or more bounded planar patches. The left
camera sits at the origin and the right camera at (B, 0, 0); both share the
rig intrinsics, so a surface point at depth z lands exactly f·B / z columns
further left in the right image.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import cv2
import numpy as np

from ..dataset.labels import DEFAULT_PALETTE, ClassLabel, LabelMap, save_label_png
from ..encodings.channels import round_half_up
from ..errors import SceneRangeError
from ..geometry import CameraRig, height_map
from ..stereo.images import DisparityMap, GrayImage, save_disparity_png, save_rgb_image, to_gray
from .scene_spec import Box, FrontoPlane, GroundPlane, SceneSpec, SlantedPlane, Texture
from .texture import sample_texture

logger = logging.getLogger(__name__)

SKY_TEXTURE = Texture(kind="noise", cell_m=0.03, contrast=0.15, seed=7919)
_RANGE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class _Patch:
    center: np.ndarray
    normal: np.ndarray
    axis_s: np.ndarray
    axis_t: np.ndarray
    half_s: float
    half_t: float
    max_depth: float
    label: ClassLabel
    color: np.ndarray
    texture: Texture
    primitive_index: int


@dataclass(frozen=True)
class GroundTruth:
    """Exact per-pixel ground truth for the left view."""

    disparity: np.ndarray
    valid: np.ndarray
    depth_m: np.ndarray
    normals: np.ndarray
    height_m: np.ndarray
    labels: LabelMap
    occluded: np.ndarray
    d_min: float = 1.0
    d_max: float = 64.0

    def disparity_map(self, include_occluded: bool = True) -> DisparityMap:
        """
        Ground-truth disparity as a DisparityMap.

        Args:
            include_occluded: Keep pixels not visible in the right view

        Returns:
            DisparityMap valid wherever a primitive was hit
        """
        valid = self.valid if include_occluded else self.valid & ~self.occluded
        values = np.clip(self.disparity, self.d_min, self.d_max)
        return DisparityMap.from_array(values, valid, self.d_min, self.d_max)


class RenderedPair(NamedTuple):
    """Left and right RGB images plus ground truth."""
    left: np.ndarray
    right: np.ndarray
    gt: GroundTruth

    @property
    def left_gray(self) -> GrayImage:
        return to_gray(self.left)

    @property
    def right_gray(self) -> GrayImage:
        return to_gray(self.right)


class _Hits(NamedTuple):
    depth: np.ndarray
    patch: np.ndarray
    s: np.ndarray
    t: np.ndarray


def _unit(vector) -> np.ndarray:
    array = np.asarray(vector, dtype=np.float64)
    norm = np.linalg.norm(array)
    if norm == 0:
        raise ValueError(f"Zero-length vector {vector}")
    return array / norm


def _class_color(label: ClassLabel, override: tuple[int, int, int] | None) -> np.ndarray:
    if override is not None:
        return np.asarray(override, dtype=np.float64)
    for color, palette_label in DEFAULT_PALETTE.items():
        if palette_label == label:
            return np.asarray(color, dtype=np.float64)
    return np.full(3, 128.0)


def _patches_for(primitive, index: int, rig: CameraRig, spec: SceneSpec) -> list[_Patch]:
    color = _class_color(primitive.label, primitive.color)
    common = {"label": primitive.label, "color": color, "texture": primitive.texture, "primitive_index": index}
    inf = float("inf")

    if isinstance(primitive, FrontoPlane):
        x_mid, half_x = (0.0, inf) if primitive.x_range is None else (
            sum(primitive.x_range) / 2, abs(primitive.x_range[1] - primitive.x_range[0]) / 2
        )
        y_mid, half_y = (0.0, inf) if primitive.y_range is None else (
            sum(primitive.y_range) / 2, abs(primitive.y_range[1] - primitive.y_range[0]) / 2
        )
        return [
            _Patch(
                center=np.array([x_mid, y_mid, primitive.z_m]),
                normal=np.array([0.0, 0.0, -1.0]),
                axis_s=np.array([1.0, 0.0, 0.0]),
                axis_t=np.array([0.0, 1.0, 0.0]),
                half_s=half_x,
                half_t=half_y,
                max_depth=inf,
                **common,
            )
        ]

    if isinstance(primitive, GroundPlane):
        up = rig.up_vector()
        axis_s = np.array([1.0, 0.0, 0.0])
        max_depth = primitive.max_depth_m or rig.focal_baseline / spec.d_min
        return [
            _Patch(
                center=-(rig.camera_height_m - primitive.height_m) * up,
                normal=up,
                axis_s=axis_s,
                axis_t=np.cross(axis_s, up),
                half_s=inf,
                half_t=inf,
                max_depth=max_depth,
                **common,
            )
        ]

    if isinstance(primitive, SlantedPlane):
        normal = _unit(primitive.normal)
        axis_s = np.cross(normal, [0.0, 0.0, 1.0])
        axis_s = np.array([1.0, 0.0, 0.0]) if np.linalg.norm(axis_s) < 1e-9 else _unit(axis_s)
        return [
            _Patch(
                center=np.asarray(primitive.center, dtype=np.float64),
                normal=normal,
                axis_s=axis_s,
                axis_t=np.cross(normal, axis_s),
                half_s=primitive.half_extent[0],
                half_t=primitive.half_extent[1],
                max_depth=inf,
                **common,
            )
        ]

    if isinstance(primitive, Box):
        low = np.asarray(primitive.min_corner, dtype=np.float64)
        high = np.asarray(primitive.max_corner, dtype=np.float64)
        middle = (low + high) / 2
        half = (high - low) / 2
        eye = np.eye(3)
        faces = []
        for axis in range(3):
            others = [k for k in range(3) if k != axis]
            for sign, bound in ((-1.0, low[axis]), (1.0, high[axis])):
                center = middle.copy()
                center[axis] = bound
                faces.append(
                    _Patch(
                        center=center,
                        normal=sign * eye[axis],
                        axis_s=eye[others[0]],
                        axis_t=eye[others[1]],
                        half_s=float(half[others[0]]),
                        half_t=float(half[others[1]]),
                        max_depth=inf,
                        **common,
                    )
                )
        return faces

    raise TypeError(f"Unsupported primitive {type(primitive).__name__}")


def _build_patches(spec: SceneSpec, rig: CameraRig) -> list[_Patch]:
    patches: list[_Patch] = []
    for index, primitive in enumerate(spec.primitives):
        patches.extend(_patches_for(primitive, index, rig, spec))
    return patches


def _cast(patches: list[_Patch], origin: np.ndarray, dirs: np.ndarray) -> _Hits:
    """Nearest patch hit along each ray; dirs have unit z so the ray parameter is depth."""
    count = dirs.shape[0]
    best = np.full(count, np.inf)
    index = np.full(count, -1, dtype=np.int64)
    best_s = np.zeros(count)
    best_t = np.zeros(count)
    for k, patch in enumerate(patches):
        denom = dirs @ patch.normal
        num = float(patch.normal @ (patch.center - origin))
        with np.errstate(divide="ignore", invalid="ignore"):
            depth = num / denom
        hit = np.isfinite(depth) & (depth > 1e-9) & (depth < best)
        if not hit.any():
            continue
        local = origin + depth[:, None] * dirs - patch.center
        s = local @ patch.axis_s
        t = local @ patch.axis_t
        hit &= (np.abs(s) <= patch.half_s) & (np.abs(t) <= patch.half_t) & (depth <= patch.max_depth)
        best[hit] = depth[hit]
        index[hit] = k
        best_s[hit] = s[hit]
        best_t[hit] = t[hit]
    return _Hits(best, index, best_s, best_t)


def _pixel_rays(rig: CameraRig, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    f = rig.focal_length_px
    return np.stack([(u - rig.cx) / f, (v - rig.cy) / f, np.ones_like(u, dtype=np.float64)], axis=-1)


def _shade(
    hits: _Hits, patches: list[_Patch], dirs: np.ndarray, spec: SceneSpec, background: np.ndarray
) -> np.ndarray:
    sky = sample_texture(SKY_TEXTURE, dirs[:, 0], dirs[:, 1], spec.seed)
    rgb = background[None, :] * (1 - SKY_TEXTURE.contrast + SKY_TEXTURE.contrast * sky)[:, None]
    for k, patch in enumerate(patches):
        mask = hits.patch == k
        if not mask.any():
            continue
        tex = sample_texture(patch.texture, hits.s[mask], hits.t[mask], spec.seed + patch.primitive_index)
        contrast = patch.texture.contrast
        rgb[mask] = patch.color[None, :] * (1 - contrast + contrast * tex)[:, None]
    return rgb


def _to_image(rgb: np.ndarray, shape: tuple[int, int], rng: np.random.Generator, sigma: float) -> np.ndarray:
    image = rgb.reshape(*shape, 3)
    if sigma > 0:
        image = image + rng.normal(0.0, sigma, size=image.shape)
    return np.clip(round_half_up(image), 0, 255).astype(np.uint8)


def render_scene(spec: SceneSpec, rig: CameraRig) -> RenderedPair:
    """
    Render a rectified stereo pair and its ground truth.

    Args:
        spec: Scene description
        rig: Camera rig shared by both views

    Returns:
        RenderedPair with RGB images and GroundTruth for the left view

    Raises:
        SceneRangeError: If a visible surface falls outside [d_min, d_max]
    """
    width, height = rig.width, rig.height
    fb = rig.focal_baseline
    patches = _build_patches(spec, rig)
    background = _class_color(spec.background_label, None)

    v, u = np.mgrid[0:height, 0:width].astype(np.float64)
    u_flat, v_flat = u.ravel(), v.ravel()
    dirs = _pixel_rays(rig, u_flat, v_flat)
    left_origin = np.zeros(3)
    right_origin = np.array([rig.baseline_m, 0.0, 0.0])

    left_hits = _cast(patches, left_origin, dirs)
    right_hits = _cast(patches, right_origin, dirs)

    hit = left_hits.patch >= 0
    disparity = np.zeros(u_flat.shape)
    disparity[hit] = fb / left_hits.depth[hit]

    outside = hit & (
        (disparity < spec.d_min - _RANGE_TOLERANCE) | (disparity > spec.d_max + _RANGE_TOLERANCE)
    )
    if outside.any():
        first = int(np.flatnonzero(outside)[0])
        primitive = patches[left_hits.patch[first]].primitive_index
        raise SceneRangeError(
            f"Primitive {primitive} renders at disparity {disparity[first]:.3f} at pixel "
            f"(u={int(u_flat[first])}, v={int(v_flat[first])}), outside [{spec.d_min}, {spec.d_max}]"
        )

    # Occlusion: follow each left hit into the right view and look for a nearer surface.
    occluded = np.zeros(u_flat.shape, dtype=bool)
    u_right = u_flat - disparity
    occluded[hit & (u_right < 0)] = True
    seen_right = hit & (u_right >= 0)
    if seen_right.any():
        right_dirs = _pixel_rays(rig, u_right[seen_right], v_flat[seen_right])
        seen = _cast(patches, right_origin, right_dirs)
        occluded[seen_right] = seen.depth < left_hits.depth[seen_right] * (1 - 1e-6)

    points = np.full((u_flat.size, 3), np.nan)
    points[hit] = dirs[hit] * left_hits.depth[hit, None]
    normals = np.zeros((u_flat.size, 3))
    for k, patch in enumerate(patches):
        mask = left_hits.patch == k
        if mask.any():
            facing = np.where(points[mask] @ patch.normal > 0, -1.0, 1.0)
            normals[mask] = facing[:, None] * patch.normal[None, :]

    labels = np.full(u_flat.shape, int(spec.background_label), dtype=np.uint8)
    for k, patch in enumerate(patches):
        labels[left_hits.patch == k] = int(patch.label)

    rng = np.random.default_rng(spec.seed)
    left = _to_image(_shade(left_hits, patches, dirs, spec, background), (height, width), rng, spec.noise_sigma)
    right = _to_image(_shade(right_hits, patches, dirs, spec, background), (height, width), rng, spec.noise_sigma)

    shape = (height, width)
    point_grid = points.reshape(*shape, 3)
    gt = GroundTruth(
        disparity=disparity.reshape(shape),
        valid=hit.reshape(shape),
        depth_m=np.where(hit, left_hits.depth, np.nan).reshape(shape),
        normals=normals.reshape(*shape, 3),
        height_m=height_map(point_grid, rig),
        labels=LabelMap(labels.reshape(shape)),
        occluded=occluded.reshape(shape),
        d_min=spec.d_min,
        d_max=spec.d_max,
    )
    logger.debug(
        "Rendered %d primitives (%d patches): %.1f%% covered, %.1f%% occluded",
        len(spec.primitives),
        len(patches),
        100.0 * hit.mean(),
        100.0 * occluded.mean(),
    )
    return RenderedPair(left, right, gt)


def fronto_plane_for_disparity(
    d: float,
    rig: CameraRig,
    label: ClassLabel = ClassLabel.TREE,
    seed: int = 0,
    cell_px: float = 1.5,
    color: tuple[int, int, int] | None = None,
) -> FrontoPlane:
    """
    An unbounded fronto-parallel plane whose disparity is d everywhere.

    The texture cell is sized to roughly ``cell_px`` pixels in the image.

    Returns:
        FrontoPlane
    """
    z = rig.focal_baseline / d
    return FrontoPlane(
        label=label,
        color=color,
        z_m=z,
        texture=Texture(kind="noise", cell_m=cell_px * z / rig.focal_length_px, contrast=0.9, seed=seed),
    )


def save_fixture(pair: RenderedPair, spec: SceneSpec, rig: CameraRig, out_dir: Path | str) -> dict[str, Path]:
    """
    Write a rendered pair and its ground truth to a directory.

    Files: left.png, right.png, disparity_gt.png (16-bit, d·256), labels.png,
    occluded.png, scene.json and rig.json.

    Returns:
        Mapping from artefact name to the written path
    """
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "left": directory / "left.png",
        "right": directory / "right.png",
        "disparity": directory / "disparity_gt.png",
        "labels": directory / "labels.png",
        "occluded": directory / "occluded.png",
        "scene": directory / "scene.json",
        "rig": directory / "rig.json",
    }
    save_rgb_image(pair.left, paths["left"])
    save_rgb_image(pair.right, paths["right"])
    save_disparity_png(pair.gt.disparity_map(), paths["disparity"])
    save_label_png(pair.gt.labels, paths["labels"])
    cv2.imwrite(str(paths["occluded"]), pair.gt.occluded.astype(np.uint8) * 255)
    spec.save(paths["scene"])
    rig.save(paths["rig"])
    logger.info("Saved fixture to %s", directory)
    return paths
