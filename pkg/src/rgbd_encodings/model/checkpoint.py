"""
Model checkpoints.

Layout: magic ``b"MININET1"``, uint32 little-endian header length, a UTF-8
JSON header (in_channels, num_classes, widths, input normalisation, parameter
names and shapes), then every parameter as little-endian float32 in header
order. Headers without normalisation load with mean 0 and scale 1.
"""

from __future__ import annotations

import json
import logging
import struct
from pathlib import Path

import numpy as np

from ..errors import CheckpointFormatError
from .mini_segnet import PARAMETER_ORDER, MiniNet

logger = logging.getLogger(__name__)

MAGIC = b"MININET1"
_LENGTH = struct.Struct("<I")
_FLOAT = np.dtype("<f4")


def save_checkpoint(net: MiniNet, path: Path | str) -> Path:
    """
    Write the net's parameters.

    Returns:
        The written path
    """
    file_path = Path(path)
    header = {
        "in_channels": net.in_channels,
        "num_classes": net.num_classes,
        "widths": list(net.widths),
        "input_mean": [float(v) for v in net.input_mean],
        "input_std": [float(v) for v in net.input_std],
        "params": [{"name": name, "shape": list(net.params[name].shape)} for name in PARAMETER_ORDER],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = b"".join(net.params[name].astype(_FLOAT).tobytes() for name in PARAMETER_ORDER)
    file_path.write_bytes(MAGIC + _LENGTH.pack(len(header_bytes)) + header_bytes + payload)
    logger.info("Saved checkpoint (%d parameters) to %s", net.parameter_count, file_path)
    return file_path


def load_checkpoint(path: Path | str) -> MiniNet:
    """
    Read a checkpoint written by ``save_checkpoint``.

    Returns:
        MiniNet with float64 parameters

    Raises:
        FileNotFoundError: If the file does not exist
        CheckpointFormatError: If the file is corrupt, truncated or inconsistent
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {file_path}")
    raw = file_path.read_bytes()
    prefix = len(MAGIC) + _LENGTH.size
    if len(raw) < prefix or raw[: len(MAGIC)] != MAGIC:
        raise CheckpointFormatError(f"{file_path}: not a checkpoint")
    (header_length,) = _LENGTH.unpack(raw[len(MAGIC):prefix])
    try:
        header = json.loads(raw[prefix: prefix + header_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointFormatError(f"{file_path}: unreadable header") from e

    offset = prefix + header_length
    params: dict[str, np.ndarray] = {}
    for entry in header.get("params", []):
        shape = tuple(entry["shape"])
        size = int(np.prod(shape)) * _FLOAT.itemsize
        chunk = raw[offset: offset + size]
        if len(chunk) != size:
            raise CheckpointFormatError(f"{file_path}: truncated at parameter {entry['name']}")
        params[entry["name"]] = np.frombuffer(chunk, dtype=_FLOAT).reshape(shape).astype(np.float64)
        offset += size
    if offset != len(raw):
        raise CheckpointFormatError(f"{file_path}: {len(raw) - offset} trailing bytes")

    try:
        return MiniNet(
            params,
            header["in_channels"],
            tuple(header["widths"]),
            header["num_classes"],
            input_mean=header.get("input_mean"),
            input_std=header.get("input_std"),
        )
    except (KeyError, ValueError) as e:
        raise CheckpointFormatError(f"{file_path}: {e}") from e
