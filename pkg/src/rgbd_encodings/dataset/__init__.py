"""Labels, splits, manifests and the multi-channel container format."""

from .container import (
    CONTAINER_SUFFIX,
    export_planes_png,
    read_container,
    read_container_header,
    write_container,
)
from .labels import (
    DEFAULT_PALETTE,
    NUM_CLASSES,
    SCORED_CLASSES,
    ClassLabel,
    LabelMap,
    ingest_label_image,
    label_map_to_rgb,
    load_label_png,
    read_palette,
    save_label_png,
    write_palette,
)
from .manifest import DatasetEntry, DatasetIndex
from .splitting import DEFAULT_SPLIT_RATIO, split_dataset

__all__ = [
    "CONTAINER_SUFFIX",
    "DEFAULT_PALETTE",
    "DEFAULT_SPLIT_RATIO",
    "NUM_CLASSES",
    "SCORED_CLASSES",
    "ClassLabel",
    "DatasetEntry",
    "DatasetIndex",
    "LabelMap",
    "export_planes_png",
    "ingest_label_image",
    "label_map_to_rgb",
    "load_label_png",
    "read_container",
    "read_container_header",
    "read_palette",
    "save_label_png",
    "split_dataset",
    "write_container",
    "write_palette",
]
