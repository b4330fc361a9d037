"""
Error types raised across the package.

Every error derives from ``RgbdError`` which is itself a ``ValueError``, so
callers that only care about bad input can keep catching ``ValueError``.
"""


class RgbdError(ValueError):
    """Base class for all package errors."""


class InvalidDisparityError(RgbdError):
    """A disparity (or depth) that cannot be converted, e.g. zero or negative."""


class OutOfRangeError(RgbdError):
    """An index, such as a matching position ``u - d``, falls outside the image."""


class DimensionError(RgbdError):
    """Two images or maps that must share dimensions do not."""


class EncodingArityError(RgbdError):
    """The channels supplied to ``pack`` do not match the encoding kind."""


class SceneRangeError(RgbdError):
    """A synthetic primitive renders outside the supported disparity range."""


class UnknownColorError(RgbdError):
    """A label image contains a color that is not in the palette (strict mode)."""


class EmptyDatasetError(RgbdError):
    """A dataset operation received no samples."""


class ContainerFormatError(RgbdError):
    """A multi-channel container file is corrupt or truncated."""


class ContainerConsistencyError(RgbdError):
    """A container header disagrees with its payload or its kind."""


class ShapeError(RgbdError):
    """A tensor has a shape the network layer cannot accept."""


class TrainConfigError(RgbdError):
    """Training data or configuration is inconsistent."""


class UndefinedMetricError(RgbdError):
    """A metric has no defined value, e.g. an empty confusion matrix."""


class CheckpointFormatError(ContainerFormatError):
    """A model checkpoint is corrupt, truncated or has unexpected shapes."""
