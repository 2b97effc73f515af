import numpy as np

from ..errors import DimensionError, DomainError
from ..numerics import RngStream

__all__ = ["random_crop_flip"]


def random_crop_flip(images: np.ndarray, rng: RngStream, padding: int = 4) -> np.ndarray:
    r"""Random crop after zero padding and random horizontal flip.

    Args:
        images (numpy.ndarray):
            Clean images with shape of (batch_size, n_channels, height, width).
        rng (RngStream):
            Stream of the crop offsets and flips.
        padding (int):
            Zero padding on each border before cropping back to the original size.
            ``0`` disables cropping. Default: ``4``.

    Returns:
        numpy.ndarray of augmented images with the same shape as ``images``.
    """
    if images.ndim != 4:
        raise DimensionError(
            "Images with shape of (batch_size, n_channels, height, width) are expected, "
            "but given {}.".format(images.shape)
        )

    if padding < 0:
        raise DomainError("padding should be nonnegative, but given {}.".format(padding))

    batch_size, _, height, width = images.shape
    offsets = rng.integers(0, 2 * padding + 1, size=(batch_size, 2))
    flips = rng.uniform(size=batch_size) < 0.5

    padded = np.pad(images, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    output = np.empty_like(images)

    for idx in range(batch_size):
        top, left = offsets[idx]
        crop = padded[idx, :, top : top + height, left : left + width]

        if flips[idx]:
            crop = crop[:, :, ::-1]

        output[idx] = crop

    return output
