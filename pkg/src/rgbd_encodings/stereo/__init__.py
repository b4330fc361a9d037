"""Dense stereo matching: semi-global matching and adaptive support weights."""

from .asw import aggregate_asw, asw_disparity, asw_support_weight
from .images import (
    DisparityMap,
    GrayImage,
    load_disparity_png,
    load_gray_image,
    load_rgb_image,
    save_disparity_png,
    save_disparity_visualization,
    save_rgb_image,
    to_gray,
)
from .matcher import compute_disparity, default_params
from .matching_cost import bt_cost, bt_cost_volume, tad_cost_volume
from .params import AswParams, MatcherParams, SgbmParams, StereoAlgorithm
from .sgbm import aggregate_sgm, sgbm_disparity
from .winner import finalize_disparity, left_right_check, right_view_disparity, select_winners

__all__ = [
    "AswParams",
    "DisparityMap",
    "GrayImage",
    "MatcherParams",
    "SgbmParams",
    "StereoAlgorithm",
    "aggregate_asw",
    "aggregate_sgm",
    "asw_disparity",
    "asw_support_weight",
    "bt_cost",
    "bt_cost_volume",
    "compute_disparity",
    "default_params",
    "finalize_disparity",
    "left_right_check",
    "load_disparity_png",
    "load_gray_image",
    "load_rgb_image",
    "right_view_disparity",
    "save_disparity_png",
    "save_disparity_visualization",
    "save_rgb_image",
    "select_winners",
    "sgbm_disparity",
    "tad_cost_volume",
    "to_gray",
]
