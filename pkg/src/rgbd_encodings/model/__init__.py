"""Desk-scale encoder-decoder segmentation network in numpy."""

from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import GradcheckResult, check_gradients
from .layers import (
    IGNORE_INDEX,
    PoolIndices,
    conv1x1_backward,
    conv1x1_forward,
    conv3x3_backward,
    conv3x3_forward,
    maxpool_backward,
    maxpool_with_indices,
    relu,
    relu_backward,
    softmax,
    softmax_cross_entropy,
    unpool_with_indices,
)
from .mini_segnet import MiniNet, activation_pattern, parameter_shapes, predict_labels
from .training import (
    DESK_SCALE_TRAINING,
    TrainConfig,
    TrainResult,
    input_statistics,
    loss_curve_frame,
    prepare_input,
    save_loss_curve,
    train,
)

__all__ = [
    "DESK_SCALE_TRAINING",
    "IGNORE_INDEX",
    "GradcheckResult",
    "MiniNet",
    "PoolIndices",
    "TrainConfig",
    "TrainResult",
    "activation_pattern",
    "check_gradients",
    "conv1x1_backward",
    "conv1x1_forward",
    "conv3x3_backward",
    "conv3x3_forward",
    "input_statistics",
    "load_checkpoint",
    "loss_curve_frame",
    "maxpool_backward",
    "maxpool_with_indices",
    "parameter_shapes",
    "predict_labels",
    "prepare_input",
    "relu",
    "relu_backward",
    "save_checkpoint",
    "save_loss_curve",
    "softmax",
    "softmax_cross_entropy",
    "train",
    "unpool_with_indices",
]
