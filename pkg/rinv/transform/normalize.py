from typing import Tuple, Union

import numpy as np

from ..corruptions import ImageBatch
from ..errors import ContractError, DataError, DimensionError, DomainError

__all__ = ["normalize", "channel_statistics", "DEFAULT_MEAN", "DEFAULT_STD"]

DEFAULT_MEAN = 0.5
DEFAULT_STD = 0.5

Statistic = Union[float, np.ndarray]


def _per_channel(value: Statistic, n_channels: int, name: str) -> np.ndarray:
    value = np.asarray(value, dtype=np.float64)

    if value.ndim == 0:
        value = np.full(n_channels, float(value))

    if value.shape != (n_channels,):
        raise DimensionError(
            "{} should be a scalar or have shape of ({},), but given {}.".format(
                name, n_channels, value.shape
            )
        )

    return value


def normalize(
    batch: ImageBatch, mean: Statistic = DEFAULT_MEAN, std: Statistic = DEFAULT_STD
) -> ImageBatch:
    r"""Normalize every channel by :math:`(x-\mu_{c})/\sigma_{c}`.

    Args:
        batch (ImageBatch):
            Unnormalized (possibly corrupted) images.
        mean (float or numpy.ndarray):
            Channel means, a scalar or one per channel. Default: ``0.5``.
        std (float or numpy.ndarray):
            Channel standard deviations, a scalar or one per channel. Default: ``0.5``.

    Returns:
        ImageBatch with ``normalized=True``.

    .. note::
        Normalization comes after corruption. Normalizing twice raises
        :class:`~rinv.errors.ContractError`.
    """
    if batch.normalized:
        raise ContractError("Batch is already normalized.")

    n_channels = batch.values.shape[1]
    mean = _per_channel(mean, n_channels, "mean")
    std = _per_channel(std, n_channels, "std")

    if np.any(std <= 0):
        raise DomainError("std should be positive, but given {}.".format(std))

    values = (batch.values - mean[:, np.newaxis, np.newaxis]) / std[:, np.newaxis, np.newaxis]

    return batch.replace(values=values.astype(batch.values.dtype, copy=False), normalized=True)


def channel_statistics(images: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    r"""Per-channel mean and standard deviation of a set of clean images.

    Args:
        images (numpy.ndarray):
            Images with shape of (n_images, n_channels, height, width).

    Returns:
        Tuple of mean and standard deviation, each with shape of (n_channels,).
    """
    if images.ndim != 4:
        raise DimensionError(
            "Images with shape of (n_images, n_channels, height, width) are expected, "
            "but given {}.".format(images.shape)
        )

    if images.shape[0] == 0:
        raise DataError("Statistics of an empty image set are undefined.")

    mean = np.mean(images, axis=(0, 2, 3), dtype=np.float64)
    std = np.std(images, axis=(0, 2, 3), dtype=np.float64)

    # constant channels keep unit scale
    std = np.where(std > 0, std, 1.0)

    return mean, std
