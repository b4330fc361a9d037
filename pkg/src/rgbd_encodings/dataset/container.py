"""
Binary container for multi-channel images.

Layout (little-endian):

    magic      8 bytes  b"RGBDENC1"
    version    uint16
    width      uint32
    height     uint32
    channels   uint8
    kind       8 bytes  ASCII, NUL padded (e.g. b"rgbdha")
    source     8 bytes  ASCII, NUL padded (b"sgbm", b"asw" or empty)
    rig hash   16 bytes ASCII hex, NUL padded when unknown
    payload    channels·height·width bytes, planar
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np

from ..encodings.channels import Channel8, save_channel_png
from ..encodings.packing import EncodingKind, MultiChannelImage
from ..errors import ContainerConsistencyError, ContainerFormatError
from ..stereo.images import save_rgb_image
from ..stereo.params import StereoAlgorithm

logger = logging.getLogger(__name__)

MAGIC = b"RGBDENC1"
VERSION = 1
_HEADER = struct.Struct("<8sHIIB8s8s16s")
HEADER_SIZE = _HEADER.size
CONTAINER_SUFFIX = ".rgbd"


def _tag(text: str | None, size: int) -> bytes:
    raw = (text or "").encode("ascii")
    if len(raw) > size:
        raise ValueError(f"Tag {text!r} longer than {size} bytes")
    return raw.ljust(size, b"\0")


def _untag(raw: bytes) -> str:
    return raw.rstrip(b"\0").decode("ascii")


def write_container(image: MultiChannelImage, path: Path | str, rig_hash: str | None = None) -> Path:
    """
    Write a MultiChannelImage to a container file.

    Args:
        image: Image to store
        path: Destination file
        rig_hash: Hash of the rig the depth channels were computed with

    Returns:
        The written path
    """
    file_path = Path(path)
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        image.width,
        image.height,
        image.channel_count,
        _tag(image.kind.value, 8),
        _tag(image.source.value if image.source else None, 8),
        _tag(rig_hash, 16),
    )
    file_path.write_bytes(header + np.ascontiguousarray(image.planes).tobytes())
    logger.debug("Wrote %s container %s (%dx%d)", image.kind.name, file_path, image.width, image.height)
    return file_path


def read_container_header(path: Path | str) -> dict:
    """
    Read and check only the header of a container.

    Returns:
        dict with version, width, height, channels, kind, source and rig_hash

    Raises:
        FileNotFoundError: If the file does not exist
        ContainerFormatError: If the header is truncated or has the wrong magic
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Container not found: {file_path}")
    with file_path.open("rb") as handle:
        raw = handle.read(HEADER_SIZE)
    return _parse_header(raw, file_path)


def _parse_header(raw: bytes, file_path: Path) -> dict:
    if len(raw) < HEADER_SIZE:
        raise ContainerFormatError(f"{file_path}: truncated header ({len(raw)} of {HEADER_SIZE} bytes)")
    magic, version, width, height, channels, kind, source, rig_hash = _HEADER.unpack(raw[:HEADER_SIZE])
    if magic != MAGIC:
        raise ContainerFormatError(f"{file_path}: bad magic {magic!r}")
    if version != VERSION:
        raise ContainerFormatError(f"{file_path}: unsupported version {version}")
    try:
        return {
            "version": version,
            "width": width,
            "height": height,
            "channels": channels,
            "kind": _untag(kind),
            "source": _untag(source),
            "rig_hash": _untag(rig_hash),
        }
    except UnicodeDecodeError as e:
        raise ContainerFormatError(f"{file_path}: header tags are not ASCII") from e


def read_container(path: Path | str, expected_rig_hash: str | None = None) -> MultiChannelImage:
    """
    Read a container written by ``write_container``.

    Args:
        path: Container file
        expected_rig_hash: When given, the stored rig hash must match it

    Returns:
        MultiChannelImage

    Raises:
        FileNotFoundError: If the file does not exist
        ContainerFormatError: If the file is corrupt or truncated
        ContainerConsistencyError: If the header kind, channel count or rig disagree
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Container not found: {file_path}")
    raw = file_path.read_bytes()
    header = _parse_header(raw, file_path)

    try:
        kind = EncodingKind.parse(header["kind"])
        source = StereoAlgorithm(header["source"]) if header["source"] else None
    except ValueError as e:
        raise ContainerFormatError(f"{file_path}: unknown tag ({e})") from e

    if header["channels"] != kind.channel_count:
        raise ContainerConsistencyError(
            f"{file_path}: kind {kind.name} needs {kind.channel_count} planes, header says {header['channels']}"
        )
    if expected_rig_hash is not None and header["rig_hash"] != expected_rig_hash:
        raise ContainerConsistencyError(
            f"{file_path}: rig hash {header['rig_hash']!r} does not match {expected_rig_hash!r}"
        )

    payload_size = header["channels"] * header["height"] * header["width"]
    payload = raw[HEADER_SIZE:]
    if len(payload) != payload_size:
        raise ContainerFormatError(f"{file_path}: payload has {len(payload)} bytes, expected {payload_size}")

    planes = np.frombuffer(payload, dtype=np.uint8).reshape(header["channels"], header["height"], header["width"])
    return MultiChannelImage(planes.copy(), kind=kind, source=source)


def export_planes_png(image: MultiChannelImage, path: Path | str) -> list[Path]:
    """
    Export a container's planes for viewing.

    RGB images become one colour PNG at ``path``; other kinds write the RGB
    part there and one grayscale PNG per depth plane next to it
    (``<stem>_D.png`` and so on).

    Returns:
        Written paths
    """
    target = Path(path)
    rgb = np.moveaxis(image.planes[:3], 0, -1)
    save_rgb_image(np.ascontiguousarray(rgb), target)
    written = [target]
    for index, name in enumerate(image.kind.depth_channels, start=3):
        plane_path = target.with_name(f"{target.stem}_{name}.png")
        save_channel_png(Channel8(image.planes[index]), plane_path)
        written.append(plane_path)
    return written
