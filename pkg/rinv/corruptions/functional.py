from typing import Union

import numpy as np

from ..errors import ContractError, DomainError
from ..numerics import RngStream
from .batch import ImageBatch
from .operator import ForwardOperator, Range

__all__ = ["gaussian_kernel1d", "apply_mask", "apply_noise", "apply_blur", "apply"]

PerImage = Union[float, np.ndarray]


def _per_image(value: PerImage, batch_size: int, name: str) -> np.ndarray:
    value = np.asarray(value, dtype=np.float64)

    if value.ndim == 0:
        value = np.full(batch_size, float(value))

    if value.shape != (batch_size,):
        raise DomainError(
            "{} should be a scalar or have shape of ({},), but given {}.".format(
                name, batch_size, value.shape
            )
        )

    return value


def _check_unnormalized(batch: ImageBatch) -> None:
    if batch.normalized:
        raise ContractError(
            "Corruption is applied to a normalized batch; corrupt first, then normalize."
        )


def gaussian_kernel1d(n: int, std: float) -> np.ndarray:
    r"""Normalized Gaussian kernel sampled at integer offsets.

    .. math::
        g_{k} \propto \exp\left(-\frac{k^{2}}{2\sigma^{2}}\right),
        \quad k = -\frac{n-1}{2},\ldots,\frac{n-1}{2}

    Args:
        n (int):
            Kernel size. Should be odd.
        std (float):
            Standard deviation :math:`\sigma>0`.

    Returns:
        numpy.ndarray with shape of (n,) summing to one.
    """
    if n < 1 or n % 2 == 0:
        raise DomainError("Blur kernel size should be odd positive, but given {}.".format(n))

    if std <= 0:
        raise DomainError("Blur std should be positive, but given {}.".format(std))

    offsets = np.arange(n) - (n - 1) // 2
    kernel = np.exp(-(offsets**2) / (2 * std**2))

    return kernel / kernel.sum()


def apply_mask(
    batch: ImageBatch, p: PerImage, rng: RngStream, exact: bool = False
) -> ImageBatch:
    r"""Zero randomly chosen pixels across all channels.

    Args:
        batch (ImageBatch):
            Unnormalized images.
        p (float or numpy.ndarray):
            Masking probability in [0, 1], shared by the batch or one per image.
        rng (RngStream):
            Stream of the mask draws.
        exact (bool):
            If ``True``, exactly ``round(p * height * width)`` pixels are zeroed
            in each image. Otherwise every pixel is zeroed independently
            with probability ``p``. Default: ``False``.

    Returns:
        ImageBatch flagged as corrupted.
    """
    _check_unnormalized(batch)

    batch_size, _, height, width = batch.values.shape
    p = _per_image(p, batch_size, "p")

    if np.any(p < 0) or np.any(p > 1):
        raise DomainError("p should be in [0, 1], but given {}.".format(p))

    if exact:
        keep = np.ones((batch_size, height * width), dtype=bool)

        for idx in range(batch_size):
            n_masked = int(round(p[idx] * height * width))
            keep[idx, rng.index_subset(height * width, n_masked)] = False

        keep = keep.reshape(batch_size, height, width)
    else:
        # uniform draws lie in [0, 1), so p = 1 masks every pixel
        keep = rng.uniform(size=(batch_size, height, width)) >= p[:, np.newaxis, np.newaxis]

    values = batch.values * keep[:, np.newaxis, :, :]

    return batch.replace(values=values.astype(batch.values.dtype, copy=False), corrupted=True)


def apply_noise(batch: ImageBatch, sigma: PerImage, rng: RngStream) -> ImageBatch:
    r"""Add white Gaussian noise to every pixel of every channel.

    The output is not clipped to [0, 1].

    Args:
        batch (ImageBatch):
            Unnormalized images.
        sigma (float or numpy.ndarray):
            Noise standard deviation, shared by the batch or one per image.
        rng (RngStream):
            Stream of the noise draws.

    Returns:
        ImageBatch flagged as corrupted.
    """
    _check_unnormalized(batch)

    sigma = _per_image(sigma, batch.batch_size, "sigma")

    if np.any(sigma < 0):
        raise DomainError("sigma should be nonnegative, but given {}.".format(sigma))

    noise = rng.standard_normal(size=batch.values.shape)
    values = batch.values + sigma[:, np.newaxis, np.newaxis, np.newaxis] * noise

    return batch.replace(values=values.astype(batch.values.dtype, copy=False), corrupted=True)


def _correlate_axis(values: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = (len(kernel) - 1) // 2
    length = values.shape[axis]

    # "symmetric" repeats the border pixel, as scipy.ndimage's "reflect" does
    pad_width = [(0, 0)] * values.ndim
    pad_width[axis] = (radius, radius)
    padded = np.pad(values, pad_width, mode="symmetric")

    output = np.zeros(values.shape, dtype=np.float64)

    for k, weight in enumerate(kernel):
        output += weight * np.take(padded, np.arange(k, k + length), axis=axis)

    return output


def apply_blur(batch: ImageBatch, n: int, std: PerImage) -> ImageBatch:
    r"""Separable isotropic Gaussian blur with reflection padding.

    No random draws are consumed. Constant images are left unchanged.

    Args:
        batch (ImageBatch):
            Unnormalized images.
        n (int):
            Kernel size. Should be odd.
        std (float or numpy.ndarray):
            Kernel standard deviation, shared by the batch or one per image.

    Returns:
        ImageBatch flagged as corrupted.
    """
    _check_unnormalized(batch)

    std = _per_image(std, batch.batch_size, "std")
    values = batch.values.astype(np.float64)
    output = np.empty_like(values)

    for value in np.unique(std):
        kernel = gaussian_kernel1d(n, float(value))
        selected = std == value
        blurred = _correlate_axis(values[selected], kernel, axis=2)
        output[selected] = _correlate_axis(blurred, kernel, axis=3)

    return batch.replace(values=output.astype(batch.values.dtype, copy=False), corrupted=True)


def apply(op: ForwardOperator, batch: ImageBatch, rng: RngStream) -> ImageBatch:
    r"""Apply a forward operator to a batch.

    Ranged severities are drawn independently for every image from
    ``rng.split("severity")``. The ``k``-th child of a composition
    draws from ``rng.split(str(k))``.

    Args:
        op (ForwardOperator):
            Operator to apply.
        batch (ImageBatch):
            Unnormalized images.
        rng (RngStream):
            Stream of all draws. Identical streams give bit-identical outputs.

    Returns:
        ImageBatch flagged as corrupted.

    Examples:

        .. code-block:: python

            >>> import numpy as np
            >>> from rinv.corruptions import ForwardOperator, ImageBatch, apply
            >>> from rinv.numerics import RngStream
            >>> batch = ImageBatch(np.ones((2, 3, 8, 8)))
            >>> op = ForwardOperator.compose(ForwardOperator.mask(0.5), ForwardOperator.noise(0.1))
            >>> corrupted = apply(op, batch, RngStream(0, "corruption"))
            >>> corrupted.corrupted
            True
    """
    _check_unnormalized(batch)

    if op.kind == "identity":
        return batch.replace(values=batch.values.copy(), corrupted=True)

    if op.kind == "compose":
        output = batch.replace(values=batch.values.copy(), corrupted=True)

        for idx, child in enumerate(op.ops):
            output = apply(child, output, rng.split(str(idx)))

        return output

    batch_size = batch.batch_size
    severity_rng = rng.split("severity")

    def draw(severity):
        if isinstance(severity, Range):
            return severity.draw(severity_rng, batch_size)

        return severity.value

    if op.kind == "mask":
        return apply_mask(batch, draw(op.p), rng, exact=op.exact)
    elif op.kind == "noise":
        return apply_noise(batch, draw(op.sigma), rng)
    elif op.kind == "blur":
        return apply_blur(batch, op.n, draw(op.std))

    raise NotImplementedError("Not support {}.".format(op.kind))
