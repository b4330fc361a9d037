"""SGD-with-momentum training of MiniNet on encoded images."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..dataset.labels import LabelMap
from ..encodings.packing import MultiChannelImage
from ..errors import TrainConfigError
from .mini_segnet import DEFAULT_WIDTHS, MiniNet

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Optimiser settings. A zero learning rate is accepted and leaves the weights untouched."""

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.001, ge=0, description="Fixed SGD learning rate")
    momentum: float = Field(default=0.9, ge=0, lt=1, description="Momentum coefficient")
    iterations: int = Field(default=200, ge=0, description="Number of single-image SGD steps")
    seed: int = Field(default=0, description="Seed for weight init and sample order")
    widths: tuple[int, int] = Field(default=DEFAULT_WIDTHS, description="Filters in the two encoder stages")
    log_every: int = Field(default=50, gt=0, description="Log the running loss every N iterations")


# The TrainConfig defaults converge too slowly on a few dozen 128x64 scenes;
# the command line trains with this unless given a config file.
DESK_SCALE_TRAINING = TrainConfig(learning_rate=0.01, iterations=2000)


@dataclass
class TrainResult:
    net: MiniNet
    losses: list[float] = field(default_factory=list)

    def loss_frame(self) -> pd.DataFrame:
        return loss_curve_frame(self.losses)


def prepare_input(image: MultiChannelImage) -> np.ndarray:
    """
    Scale 8-bit planes to [0, 1].

    Returns:
        (C, H, W) float64 tensor
    """
    return image.planes.astype(np.float64) / 255.0


def input_statistics(inputs: Sequence[np.ndarray], min_std: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-channel mean and standard deviation over every pixel of every input.

    A channel that is constant across the set (an all-invalid H plane, say)
    gets ``min_std`` so standardising it stays finite.

    Returns:
        (mean, std), each of shape (C,)
    """
    stacked = np.concatenate([x.reshape(x.shape[0], -1) for x in inputs], axis=1)
    return stacked.mean(axis=1), np.maximum(stacked.std(axis=1), min_std)


def _check_data(data: Sequence[tuple[MultiChannelImage, LabelMap]], net: MiniNet | None) -> int:
    if len(data) == 0:
        raise TrainConfigError("Training data is empty")
    counts = {image.channel_count for image, _ in data}
    if len(counts) != 1:
        raise TrainConfigError(f"Inconsistent channel counts in training data: {sorted(counts)}")
    channels = counts.pop()
    if net is not None and net.in_channels != channels:
        raise TrainConfigError(f"Net expects {net.in_channels} channels, data has {channels}")
    for index, (image, labels) in enumerate(data):
        if labels.labels.shape != (image.height, image.width):
            raise TrainConfigError(
                f"Sample {index}: labels {labels.labels.shape} do not match image {image.height}x{image.width}"
            )
    return channels


def train(
    data: Sequence[tuple[MultiChannelImage, LabelMap]], cfg: TrainConfig, net: MiniNet | None = None
) -> TrainResult:
    """
    Train with one image per step: v <- momentum·v - lr·grad, w <- w + v.

    Samples are visited in a fresh seeded permutation every epoch.

    Args:
        data: (image, labels) pairs with a common channel count
        cfg: Optimiser settings
        net: Starting weights; a seeded Glorot-initialised net standardising
            inputs with the training-set statistics when omitted. The given net
            is copied, never modified.

    Returns:
        TrainResult with the trained net and the per-iteration loss

    Raises:
        TrainConfigError: On empty data or inconsistent channel counts
    """
    channels = _check_data(data, net)
    inputs = [prepare_input(image) for image, _ in data]
    if net is not None:
        model = net.copy()
    else:
        model = MiniNet.initialize(channels, seed=cfg.seed, widths=cfg.widths)
        model.set_input_normalization(*input_statistics(inputs))
    targets = [labels.labels for _, labels in data]

    rng = np.random.default_rng(cfg.seed)
    velocity = {name: np.zeros_like(value) for name, value in model.params.items()}
    losses: list[float] = []
    order = rng.permutation(len(data))

    logger.info(
        "Training %d-channel net (%d parameters) on %d samples for %d iterations",
        channels,
        model.parameter_count,
        len(data),
        cfg.iterations,
    )
    for iteration in range(cfg.iterations):
        position = iteration % len(data)
        if position == 0 and iteration > 0:
            order = rng.permutation(len(data))
        sample = int(order[position])

        loss, grads = model.loss_and_gradients(inputs[sample], targets[sample])
        for name, grad in grads.items():
            velocity[name] = cfg.momentum * velocity[name] - cfg.learning_rate * grad
            model.params[name] += velocity[name]
        losses.append(loss)

        if (iteration + 1) % cfg.log_every == 0:
            recent = losses[-cfg.log_every:]
            logger.info("Iteration %d: mean loss %.4f", iteration + 1, float(np.mean(recent)))

    return TrainResult(net=model, losses=losses)


def loss_curve_frame(losses: Sequence[float]) -> pd.DataFrame:
    """Loss curve as an ``iteration,loss`` frame (iterations counted from 1)."""
    return pd.DataFrame({"iteration": np.arange(1, len(losses) + 1), "loss": list(losses)})


def save_loss_curve(losses: Sequence[float], path: Path | str) -> Path:
    file_path = Path(path)
    loss_curve_frame(losses).to_csv(file_path, index=False)
    return file_path
