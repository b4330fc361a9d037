"""
Scene descriptions for the synthetic stereo renderer.

A SceneSpec is a list of textured planar primitives in the left camera frame
(+x right, +y down, +z forward), each tagged with a class label. Pixels that
hit no primitive show the background (sky) at zero disparity.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, Field, field_serializer, field_validator

from ..dataset.labels import ClassLabel

Vector3 = tuple[float, float, float]


class Texture(BaseModel):
    """Surface pattern: seeded value noise or a checkerboard, in surface meters."""

    kind: Literal["noise", "checker"] = Field(default="noise", description="Pattern type")
    cell_m: float = Field(default=0.05, gt=0, description="Cell size on the surface in meters")
    contrast: float = Field(default=0.6, ge=0, le=1, description="Fraction of the base colour modulated")
    seed: int = Field(default=0, description="Per-primitive texture seed, combined with the scene seed")


class _Primitive(BaseModel):
    label: ClassLabel = Field(description="Class of every pixel this primitive covers")
    texture: Texture = Field(default_factory=Texture)
    color: tuple[int, int, int] | None = Field(default=None, description="Base RGB; defaults to the class colour")

    @field_validator("label", mode="before")
    @classmethod
    def _label_by_name(cls, value):
        if isinstance(value, str):
            return ClassLabel.from_name(value)
        return value

    @field_serializer("label")
    def _label_name(self, label: ClassLabel) -> str:
        return label.name.lower()


class FrontoPlane(_Primitive):
    """Plane at constant depth z, optionally bounded in x and y."""
    type: Literal["fronto"] = "fronto"
    z_m: float = Field(gt=0, description="Depth of the plane")
    x_range: tuple[float, float] | None = Field(default=None, description="Extent along x in meters")
    y_range: tuple[float, float] | None = Field(default=None, description="Extent along y in meters")


class GroundPlane(_Primitive):
    """The assumed ground plane (or a plane parallel to it), cut off beyond max_depth_m."""
    type: Literal["ground"] = "ground"
    height_m: float = Field(default=0.0, description="Height above the assumed ground plane")
    max_depth_m: float | None = Field(
        default=None, gt=0, description="Far cut-off; defaults to the depth of the smallest disparity"
    )


class SlantedPlane(_Primitive):
    """Rectangular patch with arbitrary orientation."""
    type: Literal["slanted"] = "slanted"
    center: Vector3 = Field(description="Patch centre in the camera frame")
    normal: Vector3 = Field(description="Patch normal (need not be unit length)")
    half_extent: tuple[float, float] = Field(description="Half sizes along the two in-plane axes")


class Box(_Primitive):
    """Axis-aligned box given by two opposite corners."""
    type: Literal["box"] = "box"
    min_corner: Vector3
    max_corner: Vector3

    @field_validator("max_corner")
    @classmethod
    def _corners_ordered(cls, value, info):
        low = info.data.get("min_corner")
        if low is not None and any(hi <= lo for lo, hi in zip(low, value, strict=True)):
            raise ValueError(f"max_corner {value} must exceed min_corner {low} on every axis")
        return value


Primitive = Annotated[FrontoPlane | GroundPlane | SlantedPlane | Box, Field(discriminator="type")]


class SceneSpec(BaseModel):
    """A complete synthetic scene."""

    primitives: list[Primitive] = Field(default_factory=list)
    background_label: ClassLabel = Field(default=ClassLabel.SKY, description="Label of pixels that hit nothing")
    seed: int = Field(default=0, description="Scene seed for textures and noise")
    noise_sigma: float = Field(default=0.0, ge=0, description="Std-dev of additive Gaussian intensity noise")
    d_min: float = Field(default=1.0, gt=0)
    d_max: float = Field(default=64.0, gt=0)

    @field_validator("background_label", mode="before")
    @classmethod
    def _background_by_name(cls, value):
        if isinstance(value, str):
            return ClassLabel.from_name(value)
        return value

    @field_serializer("background_label")
    def _background_name(self, label: ClassLabel) -> str:
        return label.name.lower()

    @classmethod
    def load(cls, path: Path | str) -> SceneSpec:
        """
        Load a scene from its JSON file.

        Returns:
            SceneSpec

        Raises:
            FileNotFoundError: If the file does not exist
        """
        file_path = Path(path)
        if not file_path.exists():
            raise FileNotFoundError(f"Scene spec not found: {file_path}")
        return cls.model_validate_json(file_path.read_text(encoding="utf-8"))

    def save(self, path: Path | str) -> None:
        """Write the scene as indented JSON."""
        Path(path).write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
