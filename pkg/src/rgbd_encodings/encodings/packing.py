"""
Multi-channel image packing.

Planes are stored in a fixed order: R, G, B followed by the depth channels of
the encoding kind (D | H | A | N_x, N_y, N_z | D, H, A).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from ..errors import DimensionError, EncodingArityError
from ..geometry import CameraRig
from ..stereo.images import DisparityMap
from ..stereo.params import StereoAlgorithm
from .channels import Channel8, encode_angle_with_gravity, encode_disparity, encode_height
from .normals import compute_normal_map, encode_normals

logger = logging.getLogger(__name__)


class EncodingKind(Enum):
    """Channel layout of a network input image."""
    RGB = "rgb"
    RGBD = "rgbd"
    RGBH = "rgbh"
    RGBA = "rgba"
    RGBN = "rgbn"
    RGBDHA = "rgbdha"

    @classmethod
    def parse(cls, name: str) -> EncodingKind:
        """
        Case-insensitive lookup, e.g. ``EncodingKind.parse("RGBDHA")``.

        Returns:
            The matching EncodingKind
        """
        return cls(name.strip().lower())

    @property
    def depth_channels(self) -> tuple[str, ...]:
        return _DEPTH_CHANNELS[self]

    @property
    def channel_names(self) -> tuple[str, ...]:
        return ("R", "G", "B", *self.depth_channels)

    @property
    def channel_count(self) -> int:
        return len(self.channel_names)

    @property
    def needs_stereo(self) -> bool:
        return self is not EncodingKind.RGB


_DEPTH_CHANNELS: dict[EncodingKind, tuple[str, ...]] = {
    EncodingKind.RGB: (),
    EncodingKind.RGBD: ("D",),
    EncodingKind.RGBH: ("H",),
    EncodingKind.RGBA: ("A",),
    EncodingKind.RGBN: ("N_x", "N_y", "N_z"),
    EncodingKind.RGBDHA: ("D", "H", "A"),
}


class EncodingVariant(NamedTuple):
    """One data set variant: an encoding kind and the stereo source of its depth channels."""
    kind: EncodingKind
    source: StereoAlgorithm | None

    @property
    def label(self) -> str:
        """Table label such as ``RGBH (SGBM)`` or ``RGB``."""
        name = self.kind.name
        return name if self.source is None else f"{name} ({self.source.name})"


ENCODING_VARIANTS: tuple[EncodingVariant, ...] = (
    EncodingVariant(EncodingKind.RGB, None),
    *(
        EncodingVariant(kind, source)
        for source in StereoAlgorithm
        for kind in EncodingKind
        if kind.needs_stereo
    ),
)


@dataclass(frozen=True)
class MultiChannelImage:
    """Planar n-channel 8-bit image: planes has shape (channel_count, height, width)."""

    planes: np.ndarray
    kind: EncodingKind
    source: StereoAlgorithm | None = None

    def __post_init__(self):
        if self.planes.ndim != 3 or self.planes.dtype != np.uint8:
            raise DimensionError(f"Planes must be a (C, H, W) uint8 array, got {self.planes.dtype} {self.planes.shape}")
        if self.planes.shape[0] != self.kind.channel_count:
            raise EncodingArityError(
                f"{self.kind.name} needs {self.kind.channel_count} planes, got {self.planes.shape[0]}"
            )

    @property
    def channel_count(self) -> int:
        return self.planes.shape[0]

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    @property
    def variant(self) -> EncodingVariant:
        return EncodingVariant(self.kind, self.source)


@dataclass(frozen=True)
class DepthChannels:
    """All depth-derived channels computed from one disparity map."""
    d: Channel8
    h: Channel8
    a: Channel8
    n: tuple[Channel8, Channel8, Channel8]


def encode_all(dmap: DisparityMap, rig: CameraRig) -> DepthChannels:
    """
    Compute D, H, A and N once so every kind can be packed from the same stereo run.

    Returns:
        DepthChannels

    Raises:
        DimensionError: If the disparity map size differs from the rig image size
    """
    nmap = compute_normal_map(dmap, rig)
    return DepthChannels(
        d=encode_disparity(dmap),
        h=encode_height(dmap, rig),
        a=encode_angle_with_gravity(nmap),
        n=encode_normals(nmap),
    )


def rgb_channels(rgb: np.ndarray) -> tuple[Channel8, Channel8, Channel8]:
    """
    Split an (H, W, 3) uint8 image into R, G and B channels.

    Returns:
        Three Channel8 planes
    """
    return tuple(Channel8(np.ascontiguousarray(rgb[:, :, i])) for i in range(3))


def pack(
    rgb: tuple[Channel8, Channel8, Channel8],
    kind: EncodingKind,
    d: Channel8 | None = None,
    h: Channel8 | None = None,
    a: Channel8 | None = None,
    n: tuple[Channel8, Channel8, Channel8] | None = None,
    source: StereoAlgorithm | None = None,
) -> MultiChannelImage:
    """
    Stack RGB and the depth channels required by ``kind`` into planar layout.

    Returns:
        MultiChannelImage with planes ordered as ``kind.channel_names``

    Raises:
        EncodingArityError: If a required channel is missing or an unused one is supplied
        DimensionError: If channel sizes differ
    """
    supplied: dict[str, Channel8] = {}
    if d is not None:
        supplied["D"] = d
    if h is not None:
        supplied["H"] = h
    if a is not None:
        supplied["A"] = a
    if n is not None:
        supplied.update(zip(("N_x", "N_y", "N_z"), n, strict=True))

    required = set(kind.depth_channels)
    missing = required - supplied.keys()
    extra = supplied.keys() - required
    if missing or extra:
        raise EncodingArityError(
            f"{kind.name} needs channels {sorted(required)}; missing {sorted(missing)}, unexpected {sorted(extra)}"
        )
    if len(rgb) != 3:
        raise EncodingArityError(f"Expected 3 RGB channels, got {len(rgb)}")

    ordered = [*rgb, *(supplied[name] for name in kind.depth_channels)]
    shapes = {channel.values.shape for channel in ordered}
    if len(shapes) != 1:
        raise DimensionError(f"Channel sizes differ: {sorted(shapes)}")

    resolved_source = source if kind.needs_stereo else None
    return MultiChannelImage(np.stack([c.values for c in ordered]), kind=kind, source=resolved_source)


def pack_from_depth(
    rgb: np.ndarray, kind: EncodingKind, depth: DepthChannels | None, source: StereoAlgorithm | None
) -> MultiChannelImage:
    """
    Pack an RGB image with exactly the depth channels ``kind`` needs.

    Returns:
        MultiChannelImage
    """
    wanted = kind.depth_channels
    if kind.needs_stereo and depth is None:
        raise EncodingArityError(f"{kind.name} needs depth channels")
    return pack(
        rgb_channels(rgb),
        kind,
        d=depth.d if "D" in wanted else None,
        h=depth.h if "H" in wanted else None,
        a=depth.a if "A" in wanted else None,
        n=depth.n if "N_x" in wanted else None,
        source=source,
    )


def unpack(image: MultiChannelImage) -> dict[str, Channel8]:
    """
    Slice a packed image back into named channels.

    Returns:
        Mapping from channel name (R, G, B, D, H, A, N_x, N_y, N_z) to Channel8
    """
    return {
        name: Channel8(np.ascontiguousarray(image.planes[i]))
        for i, name in enumerate(image.kind.channel_names)
    }
