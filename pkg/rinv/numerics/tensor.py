from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ContractError
from ._precision import check_finite, get_dtype

__all__ = ["Tensor", "backward"]

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    r"""Dense real array with optional gradient tracking.

    Tensors are immutable after construction except through optimizer steps,
    which write to ``data`` in place. Operations on tensors build a graph that
    is traversed in reverse by :meth:`backward`.

    Args:
        data (array-like):
            Values. Cast to the dtype of the current precision mode
            unless ``dtype`` is given.
        requires_grad (bool):
            If ``True``, gradients are accumulated in ``grad``.
            Default: ``False``.
        dtype (numpy.dtype, optional):
            Explicit dtype of ``data``.
        name (str, optional):
            Name shown in error messages and ``repr``.

    Examples:

        .. code-block:: python

            >>> from rinv.numerics import Tensor
            >>> a = Tensor([1.0, 2.0], requires_grad=True)
            >>> b = Tensor([3.0, 4.0])
            >>> loss = (a * b).sum()
            >>> loss.backward()
            >>> a.grad
            array([3., 4.])
    """

    __array_priority__ = 1000

    def __init__(
        self,
        data: Union[np.ndarray, float, Sequence[float], "Tensor"],
        requires_grad: bool = False,
        dtype: Optional[np.dtype] = None,
        name: Optional[str] = None,
    ) -> None:
        if isinstance(data, Tensor):
            data = data.data

        if dtype is None:
            dtype = get_dtype()

        self.data = np.array(data, dtype=dtype)
        self.requires_grad = requires_grad
        self.name = name
        self.grad = np.zeros_like(self.data) if requires_grad else None

        self._parents: Tuple["Tensor", ...] = ()
        self._backward: Optional[BackwardFn] = None
        self._op: Optional[str] = None

        check_finite(self.data, name=self._describe())

    @classmethod
    def from_op(
        cls,
        data: np.ndarray,
        parents: Sequence["Tensor"],
        backward_fn: BackwardFn,
        op: str,
    ) -> "Tensor":
        r"""Wrap the output of an operation and connect it to the graph."""
        output = cls.__new__(cls)
        output.data = data
        output.name = None
        output._op = op
        output.requires_grad = any(parent.requires_grad for parent in parents)

        if output.requires_grad:
            output._parents = tuple(parents)
            output._backward = backward_fn
        else:
            output._parents = ()
            output._backward = None

        output.grad = None

        check_finite(data, name=output._describe())

        return output

    def __repr__(self) -> str:
        s = "Tensor("
        s += "shape={}".format(self.shape)
        s += ", dtype={}".format(self.dtype)
        s += ", requires_grad={}".format(self.requires_grad)

        if self._op is not None:
            s += ", op={}".format(self._op)

        s += ")"

        return s

    def _describe(self) -> str:
        if self.name is not None:
            return "tensor {}".format(repr(self.name))

        if self._op is not None:
            return "output of {}".format(self._op)

        return "tensor"

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    @property
    def T(self) -> "Tensor":
        from . import functional as F

        return F.transpose(self)

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return self.data.item()

    def detach(self) -> "Tensor":
        r"""Return a constant tensor sharing no graph with ``self``."""
        return Tensor(self.data.copy(), dtype=self.dtype)

    def zero_grad(self) -> None:
        if self.requires_grad:
            self.grad = np.zeros_like(self.data)

    def backward(self) -> None:
        r"""Accumulate :math:`\partial\mathrm{loss}/\partial t` in ``t.grad`` for every \
        tensor ``t`` of the graph with ``requires_grad=True``.

        Gradients accumulate over repeated calls until they are zeroed.
        """
        backward(self)

    def reshape(self, *shape: int) -> "Tensor":
        from . import functional as F

        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])

        return F.reshape(self, shape)

    def sum(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False):
        from . import functional as F

        return F.sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False):
        from . import functional as F

        return F.mean(self, axis=axis, keepdims=keepdims)

    def __add__(self, other) -> "Tensor":
        from . import functional as F

        return F.add(self, other)

    def __radd__(self, other) -> "Tensor":
        from . import functional as F

        return F.add(other, self)

    def __sub__(self, other) -> "Tensor":
        from . import functional as F

        return F.sub(self, other)

    def __rsub__(self, other) -> "Tensor":
        from . import functional as F

        return F.sub(other, self)

    def __mul__(self, other) -> "Tensor":
        from . import functional as F

        return F.mul(self, other)

    def __rmul__(self, other) -> "Tensor":
        from . import functional as F

        return F.mul(other, self)

    def __truediv__(self, other) -> "Tensor":
        from . import functional as F

        return F.div(self, other)

    def __neg__(self) -> "Tensor":
        from . import functional as F

        return F.scale(self, -1.0)

    def __matmul__(self, other) -> "Tensor":
        from . import functional as F

        return F.matmul(self, other)


def _topological_order(root: Tensor) -> list:
    order = []
    visited = set()
    stack = [(root, False)]

    while len(stack) > 0:
        node, expanded = stack.pop()

        if expanded:
            order.append(node)
            continue

        if id(node) in visited:
            continue

        visited.add(id(node))
        stack.append((node, True))

        for parent in reversed(node._parents):
            if parent.requires_grad and id(parent) not in visited:
                stack.append((parent, False))

    return order


def backward(loss: Tensor) -> None:
    r"""Reverse-mode differentiation of a scalar ``loss``.

    Args:
        loss (Tensor):
            Scalar tensor produced by tracked operations.

    Raises:
        ContractError: If ``loss`` is not a scalar.
    """
    if loss.data.size != 1:
        raise ContractError(
            "backward expects a scalar loss, but given shape of {}.".format(loss.shape)
        )

    if not loss.requires_grad:
        return

    grads = {id(loss): np.ones_like(loss.data)}

    for node in reversed(_topological_order(loss)):
        grad = grads.pop(id(node), None)

        if grad is None:
            continue

        if node.grad is None:
            node.grad = grad.copy()
        else:
            node.grad = node.grad + grad

        if node._backward is None:
            continue

        parent_grads = node._backward(grad)

        for parent, parent_grad in zip(node._parents, parent_grads):
            if parent_grad is None or not parent.requires_grad:
                continue

            key = id(parent)

            if key in grads:
                grads[key] = grads[key] + parent_grad
            else:
                grads[key] = parent_grad
