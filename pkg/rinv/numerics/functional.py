from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionError, DomainError
from ..special import NORM_FLOOR, logsumexp, row_norms, softmax
from .tensor import Tensor

__all__ = [
    "add",
    "sub",
    "mul",
    "div",
    "scale",
    "exp",
    "log",
    "relu",
    "matmul",
    "affine",
    "sum",
    "mean",
    "reshape",
    "transpose",
    "concat",
    "conv2d",
    "avg_pool2d",
    "global_avg_pool",
    "l2_normalize_rows",
    "log_sum_exp_rows",
    "dot_rows",
]

Operand = Union[Tensor, np.ndarray, float, int]


def _lift(input: Operand, like: Optional[Tensor] = None) -> Tensor:
    if isinstance(input, Tensor):
        return input

    dtype = None if like is None else like.dtype

    return Tensor(input, dtype=dtype)


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)

    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)

    return grad


def _binary_operands(a: Operand, b: Operand) -> Tuple[Tensor, Tensor]:
    like = a if isinstance(a, Tensor) else b if isinstance(b, Tensor) else None
    a, b = _lift(a, like), _lift(b, like)

    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise DimensionError("Shapes {} and {} cannot be broadcast.".format(a.shape, b.shape))

    return a, b


def add(a: Operand, b: Operand) -> Tensor:
    r"""Elementwise sum with broadcasting."""
    a, b = _binary_operands(a, b)

    def backward_fn(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(grad, b.shape)

    return Tensor.from_op(a.data + b.data, (a, b), backward_fn, op="add")


def sub(a: Operand, b: Operand) -> Tensor:
    r"""Elementwise difference with broadcasting."""
    a, b = _binary_operands(a, b)

    def backward_fn(grad):
        return _unbroadcast(grad, a.shape), _unbroadcast(-grad, b.shape)

    return Tensor.from_op(a.data - b.data, (a, b), backward_fn, op="sub")


def mul(a: Operand, b: Operand) -> Tensor:
    r"""Elementwise product with broadcasting."""
    a, b = _binary_operands(a, b)

    def backward_fn(grad):
        return _unbroadcast(grad * b.data, a.shape), _unbroadcast(grad * a.data, b.shape)

    return Tensor.from_op(a.data * b.data, (a, b), backward_fn, op="mul")


def div(a: Operand, b: Operand) -> Tensor:
    r"""Elementwise quotient with broadcasting."""
    a, b = _binary_operands(a, b)

    def backward_fn(grad):
        grad_a = _unbroadcast(grad / b.data, a.shape)
        grad_b = _unbroadcast(-grad * a.data / b.data**2, b.shape)

        return grad_a, grad_b

    return Tensor.from_op(a.data / b.data, (a, b), backward_fn, op="div")


def scale(a: Tensor, c: float) -> Tensor:
    r"""Multiply by a constant scalar."""
    c = float(c)

    def backward_fn(grad):
        return (grad * c,)

    return Tensor.from_op(a.data * c, (a,), backward_fn, op="scale")


def exp(a: Tensor) -> Tensor:
    output = np.exp(a.data)

    def backward_fn(grad):
        return (grad * output,)

    return Tensor.from_op(output, (a,), backward_fn, op="exp")


def log(a: Tensor) -> Tensor:
    with np.errstate(divide="ignore", invalid="ignore"):
        output = np.log(a.data)

    def backward_fn(grad):
        return (grad / a.data,)

    return Tensor.from_op(output, (a,), backward_fn, op="log")


def relu(a: Tensor) -> Tensor:
    r"""Rectified linear unit. The gradient at exactly ``0`` is ``0``."""
    active = a.data > 0

    def backward_fn(grad):
        return (grad * active,)

    return Tensor.from_op(np.where(active, a.data, 0).astype(a.dtype), (a,), backward_fn, op="relu")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    r"""Matrix product of (M, K) and (K, N) tensors.

    Args:
        a (Tensor):
            Left operand with shape of (M, K).
        b (Tensor):
            Right operand with shape of (K, N).

    Returns:
        Tensor with shape of (M, N).
    """
    a, b = _lift(a), _lift(b, a)

    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(
            "matmul expects 2D operands, but given shapes {} and {}.".format(a.shape, b.shape)
        )

    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            "Inner dimensions of {} and {} do not agree.".format(a.shape, b.shape)
        )

    def backward_fn(grad):
        return grad @ b.data.T, a.data.T @ grad

    return Tensor.from_op(a.data @ b.data, (a, b), backward_fn, op="matmul")


def affine(input: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    r"""Compute ``input @ weight + bias``."""
    output = matmul(input, weight)

    if bias is not None:
        if bias.shape != (weight.shape[1],):
            raise DimensionError(
                "Bias of shape {} does not match weight of shape {}.".format(
                    bias.shape, weight.shape
                )
            )

        output = add(output, bias)

    return output


def _normalize_axis(axis, ndim: int) -> Tuple[int, ...]:
    if axis is None:
        return tuple(range(ndim))

    if isinstance(axis, int):
        axis = (axis,)

    return tuple(sorted(ax % ndim for ax in axis))


def sum(
    a: Tensor, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False
) -> Tensor:
    axes = _normalize_axis(axis, a.ndim)
    output = np.sum(a.data, axis=axes, keepdims=keepdims)

    def backward_fn(grad):
        if not keepdims:
            grad = np.expand_dims(grad, axis=axes)

        return (np.broadcast_to(grad, a.shape).copy(),)

    return Tensor.from_op(np.asarray(output), (a,), backward_fn, op="sum")


def mean(
    a: Tensor, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False
) -> Tensor:
    axes = _normalize_axis(axis, a.ndim)
    count = int(np.prod([a.shape[ax] for ax in axes]))

    return scale(sum(a, axis=axes, keepdims=keepdims), 1 / count)


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    try:
        output = a.data.reshape(shape)
    except ValueError:
        raise DimensionError("Cannot reshape {} into {}.".format(a.shape, tuple(shape)))

    def backward_fn(grad):
        return (grad.reshape(a.shape),)

    return Tensor.from_op(output, (a,), backward_fn, op="reshape")


def transpose(a: Tensor, axes: Optional[Sequence[int]] = None) -> Tensor:
    if axes is None:
        axes = tuple(reversed(range(a.ndim)))

    inverse = np.argsort(axes)

    def backward_fn(grad):
        return (grad.transpose(inverse),)

    return Tensor.from_op(a.data.transpose(axes), (a,), backward_fn, op="transpose")


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    r"""Concatenate tensors along ``axis``."""
    tensors = [_lift(tensor) for tensor in tensors]

    try:
        output = np.concatenate([tensor.data for tensor in tensors], axis=axis)
    except ValueError as e:
        raise DimensionError("Cannot concatenate: {}".format(e))

    boundaries = np.cumsum([tensor.shape[axis] for tensor in tensors])[:-1]

    def backward_fn(grad):
        return tuple(np.split(grad, boundaries, axis=axis))

    return Tensor.from_op(output, tuple(tensors), backward_fn, op="concat")


def conv2d(input: Tensor, weight: Tensor, padding: Optional[int] = None) -> Tensor:
    r"""2D cross-correlation with zero padding and unit stride.

    .. math::
        y_{bfhw} = \sum_{c,i,j}w_{fcij}\,x_{bc(h+i-p)(w+j-p)}

    Args:
        input (Tensor):
            Images with shape of (batch_size, n_channels, height, width).
        weight (Tensor):
            Kernels with shape of (n_filters, n_channels, kernel_size, kernel_size).
            ``kernel_size`` should be odd.
        padding (int, optional):
            Zero padding on each border. ``(kernel_size - 1) // 2`` by default,
            which preserves the spatial shape.

    Returns:
        Tensor with shape of (batch_size, n_filters, height', width').
    """
    if input.ndim != 4 or weight.ndim != 4:
        raise DimensionError(
            "conv2d expects 4D input and weight, but given {} and {}.".format(
                input.shape, weight.shape
            )
        )

    n_filters, n_channels, kernel_height, kernel_width = weight.shape

    if input.shape[1] != n_channels:
        raise DimensionError(
            "Input has {} channels, but weight expects {}.".format(input.shape[1], n_channels)
        )

    if kernel_height != kernel_width or kernel_height % 2 == 0:
        raise DomainError(
            "Square kernel of odd size is expected, but given {}.".format(weight.shape)
        )

    kernel_size = kernel_height

    if padding is None:
        padding = (kernel_size - 1) // 2

    x = np.pad(input.data, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    windows = np.lib.stride_tricks.sliding_window_view(x, (kernel_size, kernel_size), axis=(2, 3))
    # windows: (batch_size, n_channels, height', width', kernel_size, kernel_size)
    output = np.tensordot(windows, weight.data, axes=([1, 4, 5], [1, 2, 3]))
    output = np.ascontiguousarray(output.transpose(0, 3, 1, 2))
    out_height, out_width = output.shape[-2:]

    def backward_fn(grad):
        grad_weight = np.tensordot(grad, windows, axes=([0, 2, 3], [0, 2, 3]))

        # (batch_size, height', width', n_channels, kernel_size, kernel_size)
        grad_windows = np.tensordot(grad, weight.data, axes=([1], [0]))
        grad_x = np.zeros_like(x)

        for i in range(kernel_size):
            for j in range(kernel_size):
                grad_x[:, :, i : i + out_height, j : j + out_width] += grad_windows[
                    ..., i, j
                ].transpose(0, 3, 1, 2)

        height, width = x.shape[-2:]
        grad_input = grad_x[:, :, padding : height - padding, padding : width - padding]

        return grad_input, grad_weight

    return Tensor.from_op(output, (input, weight), backward_fn, op="conv2d")


def avg_pool2d(input: Tensor, kernel_size: int = 2) -> Tensor:
    r"""Non-overlapping average pooling over ``kernel_size`` x ``kernel_size`` blocks."""
    if input.ndim != 4:
        raise DimensionError("avg_pool2d expects 4D input, but given {}.".format(input.shape))

    batch_size, n_channels, height, width = input.shape
    k = kernel_size

    if height % k != 0 or width % k != 0:
        raise DimensionError(
            "Spatial shape {} is not divisible by kernel size {}.".format((height, width), k)
        )

    blocks = input.data.reshape(batch_size, n_channels, height // k, k, width // k, k)
    output = blocks.mean(axis=(3, 5))

    def backward_fn(grad):
        grad = np.broadcast_to(grad[:, :, :, np.newaxis, :, np.newaxis] / (k * k), blocks.shape)

        return (grad.reshape(input.shape),)

    return Tensor.from_op(output, (input,), backward_fn, op="avg_pool2d")


def global_avg_pool(input: Tensor) -> Tensor:
    r"""Average over spatial dimensions: (B, C, H, W) -> (B, C)."""
    if input.ndim != 4:
        raise DimensionError(
            "global_avg_pool expects 4D input, but given {}.".format(input.shape)
        )

    return mean(input, axis=(2, 3))


def l2_normalize_rows(input: Tensor, norm_floor: float = NORM_FLOOR) -> Tensor:
    r"""Project every row onto the unit sphere.

    The gradient is the projection onto the tangent space scaled by :math:`1/\|x\|`,

    .. math::
        \frac{\partial\mathcal{L}}{\partial\boldsymbol{x}}
        = \frac{1}{\|\boldsymbol{x}\|}
        (\boldsymbol{I} - \boldsymbol{y}\boldsymbol{y}^{\mathsf{T}})
        \frac{\partial\mathcal{L}}{\partial\boldsymbol{y}}.

    Args:
        input (Tensor):
            Rows to normalize with shape of (N, d).
        norm_floor (float):
            Rows whose norm is not greater than this raise
            :class:`~rinv.errors.DegenerateEmbeddingError`. Default: ``1e-12``.

    Returns:
        Tensor of unit rows with shape of (N, d).
    """
    if input.ndim != 2:
        raise DimensionError("Rows of a 2D tensor are expected, but given {}.".format(input.shape))

    norm = row_norms(input.data, eps=norm_floor)
    output = input.data / norm

    def backward_fn(grad):
        radial = np.sum(grad * output, axis=1, keepdims=True)

        return ((grad - radial * output) / norm,)

    return Tensor.from_op(output, (input,), backward_fn, op="l2_normalize_rows")


def log_sum_exp_rows(input: Tensor, where: Optional[np.ndarray] = None) -> Tensor:
    r"""Row-wise log-sum-exp computed with the max-shift trick.

    Args:
        input (Tensor):
            Tensor with shape of (N, M).
        where (numpy.ndarray, optional):
            Boolean mask with shape of (N, M). Only selected entries enter the sum.

    Returns:
        Tensor with shape of (N,).
    """
    if input.ndim != 2:
        raise DimensionError("Rows of a 2D tensor are expected, but given {}.".format(input.shape))

    output = logsumexp(input.data, axis=1, where=where)

    def backward_fn(grad):
        weights = softmax(input.data, axis=1, where=where)

        return (grad[:, np.newaxis] * weights,)

    return Tensor.from_op(np.asarray(output), (input,), backward_fn, op="log_sum_exp_rows")


def dot_rows(a: Tensor, b: Tensor) -> Tensor:
    r"""Row-wise inner products of two (N, d) tensors."""
    if a.shape != b.shape:
        raise DimensionError("Shapes {} and {} do not agree.".format(a.shape, b.shape))

    return sum(mul(a, b), axis=1)
