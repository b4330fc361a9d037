"""
Forward and backward passes of the network layers on single (C, H, W) tensors.

All functions are pure numpy in float64. Convolutions use zero padding so
3x3 layers preserve the spatial size and run as tensordot products over
sliding windows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ShapeError

IGNORE_INDEX = 255


@dataclass(frozen=True)
class PoolIndices:
    """
    Winner of every 2x2 pooling window.

    flat holds, per channel and output cell, the row-major index into the
    (H, W) input plane of the cell that won.
    """

    flat: np.ndarray
    input_shape: tuple[int, int, int]

    def __post_init__(self):
        c, h, w = self.input_shape
        if self.flat.shape != (c, h // 2, w // 2):
            raise ShapeError(f"Pool indices {self.flat.shape} do not fit input {self.input_shape}")
        rows, cols = np.divmod(self.flat, w)
        out_rows = np.arange(h // 2)[None, :, None]
        out_cols = np.arange(w // 2)[None, None, :]
        if np.any(rows // 2 != out_rows) or np.any(cols // 2 != out_cols):
            raise ShapeError("Pool index points outside its own 2x2 window")


def maxpool_with_indices(x: np.ndarray) -> tuple[np.ndarray, PoolIndices]:
    """
    2x2 max pool with stride 2 that remembers where each maximum came from.

    Ties go to the first cell in row-major window order.

    Returns:
        (pooled (C, H/2, W/2), PoolIndices)

    Raises:
        ShapeError: If H or W is odd
    """
    if x.ndim != 3:
        raise ShapeError(f"Expected a (C, H, W) tensor, got shape {x.shape}")
    c, h, w = x.shape
    if h % 2 or w % 2:
        raise ShapeError(f"Max pool needs even height and width, got {h}x{w}")
    windows = x.reshape(c, h // 2, 2, w // 2, 2).transpose(0, 1, 3, 2, 4).reshape(c, h // 2, w // 2, 4)
    winner = np.argmax(windows, axis=-1)
    pooled = np.take_along_axis(windows, winner[..., None], axis=-1)[..., 0]
    rows = 2 * np.arange(h // 2)[None, :, None] + winner // 2
    cols = 2 * np.arange(w // 2)[None, None, :] + winner % 2
    return pooled, PoolIndices(flat=rows * w + cols, input_shape=(c, h, w))


def unpool_with_indices(pooled: np.ndarray, idx: PoolIndices) -> np.ndarray:
    """
    Place each pooled value at its stored position in an otherwise zero map.

    Returns:
        (C, H, W) sparse tensor

    Raises:
        ShapeError: If pooled does not match the indices
    """
    if pooled.shape != idx.flat.shape:
        raise ShapeError(f"Pooled tensor {pooled.shape} does not match indices {idx.flat.shape}")
    c, h, w = idx.input_shape
    out = np.zeros((c, h * w), dtype=pooled.dtype)
    np.put_along_axis(out, idx.flat.reshape(c, -1), pooled.reshape(c, -1), axis=1)
    return out.reshape(c, h, w)


def maxpool_backward(dout: np.ndarray, idx: PoolIndices) -> np.ndarray:
    """Route the upstream gradient to the argmax cells."""
    return unpool_with_indices(dout, idx)


def _windows3x3(x: np.ndarray) -> np.ndarray:
    padded = np.pad(x, ((0, 0), (1, 1), (1, 1)))
    return sliding_window_view(padded, (3, 3), axis=(1, 2))


def conv3x3_forward(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """
    Same-size 3x3 convolution (cross-correlation).

    Args:
        x: (C_in, H, W)
        weight: (C_out, C_in, 3, 3)
        bias: (C_out,)

    Returns:
        (C_out, H, W)
    """
    if x.ndim != 3 or weight.shape[1] != x.shape[0]:
        raise ShapeError(f"Input {x.shape} does not match kernel {weight.shape}")
    out = np.tensordot(_windows3x3(x), weight, axes=([0, 3, 4], [1, 2, 3]))
    return out.transpose(2, 0, 1) + bias[:, None, None]


def conv3x3_backward(
    dout: np.ndarray, x: np.ndarray, weight: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Gradients of a 3x3 convolution.

    Returns:
        (dx, dweight, dbias)
    """
    dweight = np.tensordot(dout, _windows3x3(x), axes=([1, 2], [1, 2]))
    dbias = dout.sum(axis=(1, 2))
    dx = np.tensordot(_windows3x3(dout), weight[:, :, ::-1, ::-1], axes=([0, 3, 4], [0, 2, 3])).transpose(2, 0, 1)
    return dx, dweight, dbias


def conv1x1_forward(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    if x.ndim != 3 or weight.shape[1] != x.shape[0]:
        raise ShapeError(f"Input {x.shape} does not match kernel {weight.shape}")
    return np.tensordot(weight, x, axes=(1, 0)) + bias[:, None, None]


def conv1x1_backward(
    dout: np.ndarray, x: np.ndarray, weight: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dweight = np.tensordot(dout, x, axes=([1, 2], [1, 2]))
    dbias = dout.sum(axis=(1, 2))
    dx = np.tensordot(weight, dout, axes=(0, 0))
    return dx, dweight, dbias


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(dout: np.ndarray, x: np.ndarray) -> np.ndarray:
    return dout * (x > 0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Softmax over the class axis of (K, H, W) logits."""
    shifted = logits - logits.max(axis=0, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=0, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Mean per-pixel cross-entropy over non-ignored pixels.

    Args:
        logits: (K, H, W)
        labels: (H, W) integer class ids, IGNORE_INDEX for unscored pixels

    Returns:
        (loss, dlogits); both zero when every pixel is ignored

    Raises:
        ShapeError: If labels do not match the logits or exceed K - 1
    """
    k, h, w = logits.shape
    if labels.shape != (h, w):
        raise ShapeError(f"Labels {labels.shape} do not match logits {logits.shape}")
    scored = labels != IGNORE_INDEX
    if np.any(labels[scored] >= k):
        raise ShapeError(f"Label ids must be below {k}")
    count = int(scored.sum())
    if count == 0:
        return 0.0, np.zeros_like(logits)

    probs = softmax(logits)
    safe = np.where(scored, labels, 0).astype(np.int64)
    picked = np.take_along_axis(probs, safe[None], axis=0)[0]
    loss = float(-np.log(np.maximum(picked[scored], 1e-300)).sum() / count)

    grad = probs.copy()
    np.put_along_axis(grad, safe[None], picked[None] - 1.0, axis=0)
    grad *= scored[None]
    return loss, grad / count
