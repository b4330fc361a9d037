"""Depth feature channels (D, H, A, N) and multi-channel packing."""

from .channels import (
    Channel8,
    encode_angle_with_gravity,
    encode_disparity,
    encode_height,
    round_half_up,
    save_channel_png,
)
from .normals import NormalMap, compute_normal_map, encode_normals
from .packing import (
    ENCODING_VARIANTS,
    DepthChannels,
    EncodingKind,
    EncodingVariant,
    MultiChannelImage,
    encode_all,
    pack,
    pack_from_depth,
    rgb_channels,
    unpack,
)

__all__ = [
    "ENCODING_VARIANTS",
    "Channel8",
    "DepthChannels",
    "EncodingKind",
    "EncodingVariant",
    "MultiChannelImage",
    "NormalMap",
    "compute_normal_map",
    "encode_all",
    "encode_angle_with_gravity",
    "encode_disparity",
    "encode_height",
    "encode_normals",
    "pack",
    "pack_from_depth",
    "rgb_channels",
    "round_half_up",
    "save_channel_png",
    "unpack",
]
