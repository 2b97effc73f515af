import dataclasses
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError

__all__ = ["ImageBatch"]


@dataclass(frozen=True)
class ImageBatch:
    r"""Batch of images on its way from the dataset to an encoder.

    Attributes:
        values (numpy.ndarray):
            Images with shape of (batch_size, n_channels, height, width).
            Pixels lie in [0, 1] before normalization (additive noise may leave that range).
        normalized (bool):
            Whether :func:`rinv.transform.normalize` has been applied.
            Corruption is only legal on unnormalized batches.
        corrupted (bool):
            Whether a forward operator has been applied. Trainers use this flag
            to assert that the teacher only sees clean images and the student only
            corrupted ones.
    """

    values: np.ndarray
    normalized: bool = False
    corrupted: bool = False

    def __post_init__(self) -> None:
        if self.values.ndim != 4:
            raise DimensionError(
                "Images with shape of (batch_size, n_channels, height, width) are expected, "
                "but given {}.".format(self.values.shape)
            )

    @property
    def batch_size(self) -> int:
        return self.values.shape[0]

    @property
    def image_shape(self):
        return self.values.shape[1:]

    def replace(self, **changes) -> "ImageBatch":
        return dataclasses.replace(self, **changes)
