"""Parameter models for the two stereo matchers."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StereoAlgorithm(Enum):
    """Stereo matcher used to produce a disparity map."""
    SGBM = "sgbm"
    ASW = "asw"


class MatcherParams(BaseModel):
    """Settings shared by both matchers: search range and post-filtering."""

    model_config = ConfigDict(frozen=True)

    d_min: int = Field(default=1, ge=1, description="Smallest disparity searched, in pixels")
    d_max: int = Field(default=64, description="Largest disparity searched, in pixels")
    uniqueness_ratio: float = Field(
        default=10.0,
        ge=0,
        description="Percent margin by which the winner must beat any non-adjacent disparity",
    )
    lr_max_diff: float = Field(default=1.0, ge=0, description="Left-right consistency tolerance, in pixels")

    @model_validator(mode="after")
    def _range_ordered(self):
        if self.d_max < self.d_min:
            raise ValueError(f"d_max ({self.d_max}) must not be below d_min ({self.d_min})")
        return self

    @property
    def num_disparities(self) -> int:
        return self.d_max - self.d_min + 1


class SgbmParams(MatcherParams):
    """Semi-global matching: Birchfield-Tomasi cost aggregated along 1D paths."""

    p1: float = Field(default=8.0, gt=0, description="Penalty for a disparity change of one pixel")
    p2: float = Field(default=32.0, gt=0, description="Penalty for larger disparity changes")
    num_paths: int = Field(default=8, description="Aggregation directions, 4 or 8")

    @model_validator(mode="after")
    def _penalties_and_paths(self):
        if self.p2 <= self.p1:
            raise ValueError(f"p2 ({self.p2}) must exceed p1 ({self.p1})")
        if self.num_paths not in {4, 8}:
            raise ValueError(f"num_paths must be 4 or 8, got {self.num_paths}")
        return self


class AswParams(MatcherParams):
    """Adaptive support weights: colour and proximity weighted window aggregation."""

    window_radius: int = Field(default=16, ge=1, description="Support window radius in pixels")
    gamma_color: float = Field(default=14.0, gt=0, description="Colour similarity falloff, intensity units")
    gamma_spatial: float = Field(default=17.5, gt=0, description="Proximity falloff, pixels")
    truncation: float = Field(default=40.0, gt=0, description="Truncation of the absolute-difference raw cost")
    window_stride: int = Field(
        default=3,
        ge=1,
        description="Spacing of the support pixels sampled in the window; 1 uses every pixel",
    )

    @model_validator(mode="after")
    def _stride_within_window(self):
        if self.window_stride > self.window_radius:
            raise ValueError(f"window_stride ({self.window_stride}) exceeds window_radius ({self.window_radius})")
        return self
