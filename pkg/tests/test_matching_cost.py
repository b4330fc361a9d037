"""Tests for the per-pixel matching costs."""

import numpy as np
import pytest

from rgbd_encodings.errors import DimensionError, OutOfRangeError
from rgbd_encodings.stereo import GrayImage, bt_cost, bt_cost_volume, tad_cost_volume
from rgbd_encodings.stereo.matching_cost import right_columns


def gray(rows) -> GrayImage:
    """Helper to build a GrayImage from nested lists."""
    return GrayImage(np.asarray(rows, dtype=np.uint8))


class TestBirchfieldTomasi:
    """Test the sampling-insensitive dissimilarity."""

    @pytest.mark.parametrize(("left", "right", "u", "d", "expected"), [
        ([10, 20, 30], [10, 25, 30], 1, 0, 0.0),  # inside the right interpolation interval
        ([10, 20, 30], [40, 50, 60], 1, 0, 25.0),
        ([10, 20, 30], [10, 20, 30], 2, 0, 0.0),
        ([0, 0, 100, 100], [0, 100, 100, 100], 2, 1, 0.0),
    ])
    def test_examples(self, left, right, u, d, expected):
        """Test hand-computed costs."""
        assert bt_cost(left, right, u, d) == pytest.approx(expected)

    def test_identical_rows_cost_nothing(self, rng):
        """Test that a row matched against itself at d = 0 is free everywhere."""
        row = rng.integers(0, 256, size=32)
        assert all(bt_cost(row, row, u, 0) == 0.0 for u in range(32))

    def test_out_of_range(self):
        """Test that matches left of the right row are rejected."""
        with pytest.raises(OutOfRangeError):
            bt_cost([1, 2, 3], [1, 2, 3], 1, 2)

    def test_volume_matches_scalar_cost(self, rng):
        """Test that the volume agrees with bt_cost wherever the match is in view."""
        left = rng.integers(0, 256, size=(3, 24)).astype(np.uint8)
        right = rng.integers(0, 256, size=(3, 24)).astype(np.uint8)
        volume = bt_cost_volume(GrayImage(left), GrayImage(right), d_min=1, d_max=8)
        assert volume.shape == (3, 24, 8)
        for v in range(3):
            for u in range(8, 24):
                for k, d in enumerate(range(1, 9)):
                    assert volume[v, u, k] == pytest.approx(bt_cost(left[v], right[v], u, d))

    def test_volume_half_pixel_resolution(self, rng):
        """Test that every cost is a non-negative multiple of 0.5."""
        left = GrayImage(rng.integers(0, 256, size=(8, 40)).astype(np.uint8))
        right = GrayImage(rng.integers(0, 256, size=(8, 40)).astype(np.uint8))
        volume = bt_cost_volume(left, right, d_min=1, d_max=16)
        assert volume.min() >= 0
        np.testing.assert_array_equal(volume * 2, np.round(volume * 2))

    def test_size_mismatch(self):
        """Test that images of different size are rejected."""
        with pytest.raises(DimensionError):
            bt_cost_volume(gray([[1, 2, 3]]), gray([[1, 2]]))


class TestRightColumns:
    """Test the clamped right-image column lookup."""

    def test_clamped_to_first_column(self):
        """Test that matches falling off the image reuse column 0."""
        cols = right_columns(width=6, d_min=1, d_max=3)
        assert cols.shape == (6, 3)
        np.testing.assert_array_equal(cols[0], [0, 0, 0])
        np.testing.assert_array_equal(cols[5], [4, 3, 2])


class TestTruncatedDifference:
    """Test the raw cost used by adaptive support weights."""

    def test_truncation(self):
        """Test that large differences are truncated."""
        left = gray([[0, 0, 0, 200]])
        right = gray([[0, 100, 10, 0]])
        volume = tad_cost_volume(left, right, d_min=1, d_max=2, truncation=40.0)
        assert volume[0, 3, 0] == pytest.approx(40.0)  # |200 - 10| truncated
        assert volume[0, 3, 1] == pytest.approx(40.0)  # |200 - 100| truncated
        assert volume[0, 2, 0] == pytest.approx(40.0)  # |0 - 100| truncated
        assert volume[0, 2, 1] == pytest.approx(0.0)
