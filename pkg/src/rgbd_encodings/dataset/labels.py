"""
Class labels, colour palettes and label-image ingestion.

Palette files are plain text with one ``R,G,B,class_name`` entry per line;
blank lines and lines starting with ``#`` are skipped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import numpy as np

from ..errors import DimensionError, UnknownColorError
from ..stereo.images import load_rgb_image, save_rgb_image

logger = logging.getLogger(__name__)

Color = tuple[int, int, int]


class ClassLabel(IntEnum):
    """The six scoreable terrain classes plus an ignore label for unlabelled pixels."""
    SKY = 0
    WATER = 1
    DIRT = 2
    GRASS = 3
    BUSH = 4
    TREE = 5
    IGNORE = 255

    @classmethod
    def from_name(cls, name: str) -> ClassLabel:
        """
        Look up a label by its lowercase name.

        Returns:
            The matching ClassLabel

        Raises:
            ValueError: If the name is unknown
        """
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"Unknown class name: {name!r}") from None


SCORED_CLASSES: tuple[ClassLabel, ...] = tuple(label for label in ClassLabel if label != ClassLabel.IGNORE)
NUM_CLASSES = len(SCORED_CLASSES)

DEFAULT_PALETTE: dict[Color, ClassLabel] = {
    (135, 206, 235): ClassLabel.SKY,
    (30, 80, 200): ClassLabel.WATER,
    (150, 100, 50): ClassLabel.DIRT,
    (90, 170, 60): ClassLabel.GRASS,
    (60, 110, 40): ClassLabel.BUSH,
    (20, 70, 20): ClassLabel.TREE,
    (0, 0, 0): ClassLabel.IGNORE,
}


@dataclass(frozen=True)
class LabelMap:
    """Per-pixel class ids (uint8), IGNORE where unlabelled."""

    labels: np.ndarray

    def __post_init__(self):
        if self.labels.ndim != 2 or self.labels.dtype != np.uint8:
            raise DimensionError(f"LabelMap needs a 2D uint8 array, got {self.labels.dtype} {self.labels.shape}")

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def scored(self) -> np.ndarray:
        """Mask of pixels that carry one of the six classes."""
        return self.labels != ClassLabel.IGNORE


def read_palette(path: Path | str) -> dict[Color, ClassLabel]:
    """
    Read a palette text file.

    Returns:
        Mapping from RGB colour to ClassLabel

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If a line is malformed
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Palette not found: {file_path}")
    palette: dict[Color, ClassLabel] = {}
    for number, raw in enumerate(file_path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) != 4:
            raise ValueError(f"{file_path}:{number}: expected 'R,G,B,class_name', got {line!r}")
        color = (int(parts[0]), int(parts[1]), int(parts[2]))
        palette[color] = ClassLabel.from_name(parts[3])
    return palette


def write_palette(palette: dict[Color, ClassLabel], path: Path | str) -> None:
    """Write a palette in the ``R,G,B,class_name`` text format."""
    lines = [f"{r},{g},{b},{label.name.lower()}" for (r, g, b), label in palette.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def ingest_label_image(
    img: np.ndarray,
    palette: dict[Color, ClassLabel] | None = None,
    strict: bool = False,
) -> LabelMap:
    """
    Convert a colour-coded label image to class ids by exact colour lookup.

    Args:
        img: (H, W, 3) uint8 RGB label image
        palette: Colour to class table (defaults to DEFAULT_PALETTE)
        strict: Raise on the first colour missing from the palette instead of ignoring it

    Returns:
        LabelMap

    Raises:
        UnknownColorError: In strict mode, naming the first offending pixel
    """
    palette = palette or DEFAULT_PALETTE
    if img.ndim != 3 or img.shape[2] != 3:
        raise DimensionError(f"Label image must be (H, W, 3), got {img.shape}")

    packed = (img[:, :, 0].astype(np.uint32) << 16) | (img[:, :, 1].astype(np.uint32) << 8) | img[:, :, 2]
    labels = np.full(packed.shape, ClassLabel.IGNORE, dtype=np.uint8)
    known = np.zeros(packed.shape, dtype=bool)
    for (r, g, b), label in palette.items():
        hit = packed == ((r << 16) | (g << 8) | b)
        labels[hit] = label
        known |= hit

    if not known.all():
        rows, cols = np.nonzero(~known)
        if strict:
            v, u = int(rows[0]), int(cols[0])
            raise UnknownColorError(f"Colour {tuple(int(c) for c in img[v, u])} at pixel (u={u}, v={v}) not in palette")
        unknown_colors = np.unique(packed[~known])
        logger.warning(
            "%d pixels in %d unknown colours mapped to ignore", rows.size, unknown_colors.size
        )
    return LabelMap(labels)


def label_map_to_rgb(label_map: LabelMap, palette: dict[Color, ClassLabel] | None = None) -> np.ndarray:
    """
    Colour a label map with the first palette colour of each class.

    Returns:
        (H, W, 3) uint8 RGB image
    """
    palette = palette or DEFAULT_PALETTE
    colors: dict[int, Color] = {}
    for color, label in palette.items():
        colors.setdefault(int(label), color)
    rgb = np.zeros((*label_map.labels.shape, 3), dtype=np.uint8)
    for label, color in colors.items():
        rgb[label_map.labels == label] = color
    return rgb


def save_label_png(label_map: LabelMap, path: Path | str, palette: dict[Color, ClassLabel] | None = None) -> None:
    """Write a label map as a palette-coloured PNG."""
    save_rgb_image(label_map_to_rgb(label_map, palette), path)


def load_label_png(
    path: Path | str, palette: dict[Color, ClassLabel] | None = None, strict: bool = False
) -> LabelMap:
    """
    Read a palette-coloured label PNG.

    Returns:
        LabelMap
    """
    return ingest_label_image(load_rgb_image(path), palette, strict=strict)
