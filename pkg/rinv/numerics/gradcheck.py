from typing import Callable, Optional, Sequence

import numpy as np

from .random import RngStream
from .tensor import Tensor

__all__ = ["numerical_gradient", "relative_error", "check_gradients"]


def numerical_gradient(
    fn: Callable[[], Tensor],
    tensor: Tensor,
    h: float = 1e-5,
    indices: Optional[np.ndarray] = None,
) -> np.ndarray:
    r"""Central finite differences of a scalar function w.r.t. entries of ``tensor``.

    Args:
        fn (callable):
            Function without arguments returning a scalar tensor. It is re-evaluated
            after each perturbation of ``tensor.data``.
        tensor (Tensor):
            Tensor whose entries are perturbed in place and restored afterwards.
        h (float):
            Step size. Default: ``1e-5``.
        indices (numpy.ndarray, optional):
            Flat indices to differentiate. All entries by default.

    Returns:
        numpy.ndarray of partial derivatives, flat, one per index.
    """
    flat = tensor.data.reshape(-1)

    if indices is None:
        indices = np.arange(flat.size)

    grad = np.zeros(len(indices), dtype=np.float64)

    for n, idx in enumerate(indices):
        original = flat[idx]

        flat[idx] = original + h
        plus = fn().item()
        flat[idx] = original - h
        minus = fn().item()
        flat[idx] = original

        grad[n] = (plus - minus) / (2 * h)

    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, eps: float = 1e-30) -> float:
    r"""Norm-wise relative error :math:`\|a-n\|/\max(\|a\|,\|n\|)`."""
    analytic, numeric = np.ravel(analytic), np.ravel(numeric)
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), eps)

    return float(np.linalg.norm(analytic - numeric) / scale)


def check_gradients(
    fn: Callable[[], Tensor],
    tensors: Sequence[Tensor],
    h: float = 1e-5,
    max_entries: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> float:
    r"""Compare analytic gradients of ``fn`` with central finite differences.

    Args:
        fn (callable):
            Function without arguments returning a scalar tensor.
        tensors (sequence of Tensor):
            Tensors with ``requires_grad=True`` to check.
        h (float):
            Step size of finite differences. Default: ``1e-5``.
        max_entries (int, optional):
            If given, at most this many randomly chosen entries per tensor are checked.
        rng (RngStream, optional):
            Stream choosing the checked entries when ``max_entries`` is given.

    Returns:
        Largest relative error over ``tensors``.
    """
    for tensor in tensors:
        tensor.zero_grad()

    fn().backward()

    if rng is None:
        rng = RngStream(0, "gradcheck")

    error = 0.0

    for tensor in tensors:
        size = tensor.data.size

        if max_entries is None or size <= max_entries:
            indices = np.arange(size)
        else:
            indices = rng.index_subset(size, max_entries)

        analytic = tensor.grad.reshape(-1)[indices].copy()
        numeric = numerical_gradient(fn, tensor, h=h, indices=indices)
        error = max(error, relative_error(analytic, numeric))

    return error
