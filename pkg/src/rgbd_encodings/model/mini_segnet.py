"""
Small encoder-decoder pixel classifier with index-based unpooling.

    x -> conv3x3 -> relu -> pool  (enc1)
      -> conv3x3 -> relu -> pool  (enc2)
      -> unpool -> conv3x3 -> relu (dec2, indices of enc2)
      -> unpool -> conv3x3 -> relu (dec1, indices of enc1)
      -> conv1x1 -> class logits

Input height and width must be multiples of four.
"""

from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np

from ..dataset.labels import NUM_CLASSES, LabelMap
from ..errors import ShapeError
from .layers import (
    conv1x1_backward,
    conv1x1_forward,
    conv3x3_backward,
    conv3x3_forward,
    maxpool_backward,
    maxpool_with_indices,
    relu,
    relu_backward,
    softmax_cross_entropy,
    unpool_with_indices,
)

logger = logging.getLogger(__name__)

DEFAULT_WIDTHS = (16, 32)
PARAMETER_ORDER = (
    "enc1_w", "enc1_b", "enc2_w", "enc2_b", "dec2_w", "dec2_b", "dec1_w", "dec1_b", "cls_w", "cls_b",
)


def parameter_shapes(in_channels: int, widths: tuple[int, int], num_classes: int) -> dict[str, tuple[int, ...]]:
    """Shape of every parameter for the given channel configuration."""
    w1, w2 = widths
    return {
        "enc1_w": (w1, in_channels, 3, 3),
        "enc1_b": (w1,),
        "enc2_w": (w2, w1, 3, 3),
        "enc2_b": (w2,),
        "dec2_w": (w1, w2, 3, 3),
        "dec2_b": (w1,),
        "dec1_w": (w1, w1, 3, 3),
        "dec1_b": (w1,),
        "cls_w": (num_classes, w1),
        "cls_b": (num_classes,),
    }


class MiniNet:
    """
    Network parameters plus the forward and backward passes.

    Parameters live in ``params`` as a name -> float64 array dict. Inputs are
    standardised per channel with ``input_mean`` and ``input_std`` before the
    first convolution; these are fixed from the training set, not learned.
    """

    def __init__(
        self,
        params: dict[str, np.ndarray],
        in_channels: int,
        widths: tuple[int, int] = DEFAULT_WIDTHS,
        num_classes: int = NUM_CLASSES,
        input_mean: np.ndarray | None = None,
        input_std: np.ndarray | None = None,
    ):
        expected = parameter_shapes(in_channels, widths, num_classes)
        for name, shape in expected.items():
            if name not in params:
                raise ShapeError(f"Missing parameter {name}")
            if params[name].shape != shape:
                raise ShapeError(f"Parameter {name} has shape {params[name].shape}, expected {shape}")
        self.params = {name: np.asarray(params[name], dtype=np.float64) for name in PARAMETER_ORDER}
        self.in_channels = in_channels
        self.widths = tuple(widths)
        self.num_classes = num_classes
        self.set_input_normalization(
            np.zeros(in_channels) if input_mean is None else input_mean,
            np.ones(in_channels) if input_std is None else input_std,
        )

    def set_input_normalization(self, mean: np.ndarray, std: np.ndarray) -> None:
        """
        Fix the per-channel shift and scale applied to every input.

        Raises:
            ShapeError: If either vector does not have one entry per input channel
            ValueError: If a scale is not positive and finite
        """
        mean = np.asarray(mean, dtype=np.float64).reshape(-1)
        std = np.asarray(std, dtype=np.float64).reshape(-1)
        if mean.shape != (self.in_channels,) or std.shape != (self.in_channels,):
            raise ShapeError(
                f"Normalisation needs {self.in_channels} values per vector, got {mean.size} and {std.size}"
            )
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(std)) or np.any(std <= 0):
            raise ValueError("Input normalisation must be finite with positive scales")
        self.input_mean = mean
        self.input_std = std

    @classmethod
    def initialize(
        cls, in_channels: int, seed: int = 0, widths: tuple[int, int] = DEFAULT_WIDTHS, num_classes: int = NUM_CLASSES
    ) -> MiniNet:
        """
        Seeded Glorot-uniform weights, zero biases.

        Returns:
            MiniNet
        """
        rng = np.random.default_rng(seed)
        params: dict[str, np.ndarray] = {}
        for name, shape in parameter_shapes(in_channels, widths, num_classes).items():
            if name.endswith("_b"):
                params[name] = np.zeros(shape)
                continue
            receptive = int(np.prod(shape[2:])) if len(shape) == 4 else 1
            fan_in, fan_out = shape[1] * receptive, shape[0] * receptive
            limit = math.sqrt(6.0 / (fan_in + fan_out))
            params[name] = rng.uniform(-limit, limit, size=shape)
        return cls(params, in_channels, widths, num_classes)

    @classmethod
    def zeros(
        cls, in_channels: int, widths: tuple[int, int] = DEFAULT_WIDTHS, num_classes: int = NUM_CLASSES
    ) -> MiniNet:
        shapes = parameter_shapes(in_channels, widths, num_classes)
        return cls({name: np.zeros(shape) for name, shape in shapes.items()}, in_channels, widths, num_classes)

    def copy(self) -> MiniNet:
        return MiniNet(
            {k: v.copy() for k, v in self.params.items()},
            self.in_channels,
            self.widths,
            self.num_classes,
            input_mean=self.input_mean.copy(),
            input_std=self.input_std.copy(),
        )

    @property
    def parameter_count(self) -> int:
        return sum(p.size for p in self.params.values())

    def _check_input(self, x: np.ndarray) -> None:
        if x.ndim != 3 or x.shape[0] != self.in_channels:
            raise ShapeError(f"Net expects ({self.in_channels}, H, W) input, got {x.shape}")
        if x.shape[1] % 4 or x.shape[2] % 4:
            raise ShapeError(f"Input height and width must be multiples of 4, got {x.shape[1]}x{x.shape[2]}")

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, dict[str, Any]]:
        """
        Run the network.

        Args:
            x: (in_channels, H, W) input scaled to [0, 1]; standardised here

        Returns:
            (logits (num_classes, H, W), cache for ``backward``)

        Raises:
            ShapeError: On a channel or size mismatch
        """
        self._check_input(x)
        p = self.params
        x = (x - self.input_mean[:, None, None]) / self.input_std[:, None, None]
        cache: dict[str, Any] = {"x": x}

        cache["enc1_pre"] = conv3x3_forward(x, p["enc1_w"], p["enc1_b"])
        cache["enc1_act"] = relu(cache["enc1_pre"])
        pooled1, cache["pool1"] = maxpool_with_indices(cache["enc1_act"])
        cache["enc2_in"] = pooled1

        cache["enc2_pre"] = conv3x3_forward(pooled1, p["enc2_w"], p["enc2_b"])
        cache["enc2_act"] = relu(cache["enc2_pre"])
        pooled2, cache["pool2"] = maxpool_with_indices(cache["enc2_act"])

        cache["dec2_in"] = unpool_with_indices(pooled2, cache["pool2"])
        cache["dec2_pre"] = conv3x3_forward(cache["dec2_in"], p["dec2_w"], p["dec2_b"])
        dec2_act = relu(cache["dec2_pre"])

        cache["dec1_in"] = unpool_with_indices(dec2_act, cache["pool1"])
        cache["dec1_pre"] = conv3x3_forward(cache["dec1_in"], p["dec1_w"], p["dec1_b"])
        cache["dec1_act"] = relu(cache["dec1_pre"])

        logits = conv1x1_forward(cache["dec1_act"], p["cls_w"], p["cls_b"])
        return logits, cache

    def backward(self, dlogits: np.ndarray, cache: dict[str, Any]) -> dict[str, np.ndarray]:
        """
        Backpropagate a logits gradient.

        Returns:
            Gradient for every parameter, keyed like ``params``
        """
        p = self.params
        grads: dict[str, np.ndarray] = {}

        d, grads["cls_w"], grads["cls_b"] = conv1x1_backward(dlogits, cache["dec1_act"], p["cls_w"])
        d = relu_backward(d, cache["dec1_pre"])
        d, grads["dec1_w"], grads["dec1_b"] = conv3x3_backward(d, cache["dec1_in"], p["dec1_w"])
        # Gradient of unpooling is a gather at the same indices.
        d = _gather(d, cache["pool1"])

        d = relu_backward(d, cache["dec2_pre"])
        d, grads["dec2_w"], grads["dec2_b"] = conv3x3_backward(d, cache["dec2_in"], p["dec2_w"])
        d = _gather(d, cache["pool2"])

        d = maxpool_backward(d, cache["pool2"])
        d = relu_backward(d, cache["enc2_pre"])
        d, grads["enc2_w"], grads["enc2_b"] = conv3x3_backward(d, cache["enc2_in"], p["enc2_w"])

        d = maxpool_backward(d, cache["pool1"])
        d = relu_backward(d, cache["enc1_pre"])
        _, grads["enc1_w"], grads["enc1_b"] = conv3x3_backward(d, cache["x"], p["enc1_w"])
        return grads

    def loss_and_gradients(self, x: np.ndarray, labels: np.ndarray) -> tuple[float, dict[str, np.ndarray]]:
        """
        Cross-entropy loss of one image and the gradient of every parameter.

        Returns:
            (loss, grads)
        """
        logits, cache = self.forward(x)
        loss, dlogits = softmax_cross_entropy(logits, labels)
        return loss, self.backward(dlogits, cache)

    def loss(self, x: np.ndarray, labels: np.ndarray) -> float:
        logits, _ = self.forward(x)
        return softmax_cross_entropy(logits, labels)[0]


def _gather(d: np.ndarray, idx) -> np.ndarray:
    c = d.shape[0]
    return np.take_along_axis(d.reshape(c, -1), idx.flat.reshape(c, -1), axis=1).reshape(idx.flat.shape)


def activation_pattern(cache: dict[str, Any]) -> tuple[np.ndarray, ...]:
    """ReLU masks and pool winners of a forward pass; a change means a kink was crossed."""
    return (
        cache["enc1_pre"] > 0,
        cache["enc2_pre"] > 0,
        cache["dec2_pre"] > 0,
        cache["dec1_pre"] > 0,
        cache["pool1"].flat,
        cache["pool2"].flat,
    )


def predict_labels(net: MiniNet, x: np.ndarray) -> LabelMap:
    """
    Per-pixel argmax of the logits; ties go to the lowest class id.

    Returns:
        LabelMap

    Raises:
        ShapeError: On a channel or size mismatch
    """
    logits, _ = net.forward(x)
    return LabelMap(np.argmax(logits, axis=0).astype(np.uint8))
