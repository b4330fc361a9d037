"""Central-difference check of MiniNet's analytic gradients."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from .layers import softmax_cross_entropy
from .mini_segnet import MiniNet, activation_pattern

logger = logging.getLogger(__name__)


class GradcheckResult(NamedTuple):
    max_relative_error: float
    checked: int
    skipped: int
    worst_parameter: str | None


def _same_pattern(a: tuple[np.ndarray, ...], b: tuple[np.ndarray, ...]) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a, b, strict=True))


def check_gradients(
    net: MiniNet,
    x: np.ndarray,
    labels: np.ndarray,
    step: float = 1e-4,
    samples_per_parameter: int = 6,
    seed: int = 0,
    floor: float = 1e-6,
) -> GradcheckResult:
    """
    Compare analytic gradients with central differences at random entries.

    Entries whose +/- step perturbation flips a ReLU mask or a pool winner
    are skipped, since the loss is not differentiable across those kinks.

    Args:
        net: Network to check (restored after every perturbation)
        x: Input tensor
        labels: (H, W) class ids
        step: Finite-difference step
        samples_per_parameter: Random entries checked per parameter array
        seed: Entry selection seed
        floor: Lower bound of the relative-error denominator

    Returns:
        GradcheckResult
    """
    logits, cache = net.forward(x)
    _, dlogits = softmax_cross_entropy(logits, labels)
    analytic = net.backward(dlogits, cache)
    base_pattern = activation_pattern(cache)

    rng = np.random.default_rng(seed)
    worst, worst_name, checked, skipped = 0.0, None, 0, 0
    for name, value in net.params.items():
        flat = value.reshape(-1)
        count = min(samples_per_parameter, flat.size)
        for i in rng.choice(flat.size, size=count, replace=False):
            original = flat[i]
            flat[i] = original + step
            plus_logits, plus_cache = net.forward(x)
            flat[i] = original - step
            minus_logits, minus_cache = net.forward(x)
            flat[i] = original

            if not (
                _same_pattern(base_pattern, activation_pattern(plus_cache))
                and _same_pattern(base_pattern, activation_pattern(minus_cache))
            ):
                skipped += 1
                continue

            numeric = (
                softmax_cross_entropy(plus_logits, labels)[0] - softmax_cross_entropy(minus_logits, labels)[0]
            ) / (2 * step)
            exact = float(analytic[name].reshape(-1)[i])
            error = abs(exact - numeric) / max(abs(exact), abs(numeric), floor)
            checked += 1
            if error > worst:
                worst, worst_name = error, name

    logger.debug("Gradient check: %d entries, %d skipped, max relative error %.2e", checked, skipped, worst)
    return GradcheckResult(worst, checked, skipped, worst_name)
