"""Dispatch between the two stereo matchers."""

from __future__ import annotations

from .asw import asw_disparity
from .images import DisparityMap, GrayImage
from .params import AswParams, MatcherParams, SgbmParams, StereoAlgorithm
from .sgbm import sgbm_disparity


def default_params(algorithm: StereoAlgorithm) -> MatcherParams:
    """
    Default parameters for an algorithm.

    Returns:
        SgbmParams or AswParams
    """
    return SgbmParams() if algorithm == StereoAlgorithm.SGBM else AswParams()


def compute_disparity(
    left: GrayImage,
    right: GrayImage,
    algorithm: StereoAlgorithm | str,
    params: MatcherParams | None = None,
) -> DisparityMap:
    """
    Run the selected matcher on a rectified pair.

    Returns:
        DisparityMap

    Raises:
        TypeError: If params do not belong to the selected algorithm
    """
    resolved = StereoAlgorithm(algorithm)
    params = params or default_params(resolved)
    if resolved == StereoAlgorithm.SGBM:
        if not isinstance(params, SgbmParams):
            raise TypeError(f"SGBM needs SgbmParams, got {type(params).__name__}")
        return sgbm_disparity(left, right, params)
    if not isinstance(params, AswParams):
        raise TypeError(f"ASW needs AswParams, got {type(params).__name__}")
    return asw_disparity(left, right, params)
