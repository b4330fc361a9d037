"""Deterministic train/test splitting."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from typing import TypeVar

import numpy as np

from ..errors import EmptyDatasetError

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_SPLIT_RATIO = 0.8


def split_dataset(ids: Sequence[T], ratio: float = DEFAULT_SPLIT_RATIO, seed: int = 0) -> tuple[list[T], list[T]]:
    """
    Shuffle ids with a seeded permutation and send the first floor(ratio·n) to train.

    Args:
        ids: Sample identifiers
        ratio: Train fraction, strictly between 0 and 1
        seed: Shuffle seed

    Returns:
        (train ids, test ids), each in shuffled order

    Raises:
        EmptyDatasetError: If ids is empty
        ValueError: If ratio is not in (0, 1)
    """
    if len(ids) == 0:
        raise EmptyDatasetError("Cannot split an empty dataset")
    if not 0 < ratio < 1:
        raise ValueError(f"Split ratio must be in (0, 1), got {ratio}")

    order = np.random.default_rng(seed).permutation(len(ids))
    # Decimal ratios count exactly: 0.29 of 100 is 29, not floor(28.999...)
    n_train = math.floor(Fraction(str(ratio)) * len(ids))
    train = [ids[i] for i in order[:n_train]]
    test = [ids[i] for i in order[n_train:]]
    logger.info("Split %d samples into %d train / %d test (seed %d)", len(ids), len(train), len(test), seed)
    return train, test
