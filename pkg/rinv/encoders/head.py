from typing import Dict, List, Optional

import numpy as np

from ..errors import DimensionError, DomainError
from ..numerics import RngStream, Tensor
from ..numerics import functional as F

__all__ = ["LinearHead", "build_head", "head_logits"]


class LinearHead:
    r"""Linear classifier on top of embeddings.

    Args:
        weight (Tensor):
            Weight with shape of (embed_dim, n_classes).
        bias (Tensor):
            Bias with shape of (n_classes,).
    """

    def __init__(self, weight: Tensor, bias: Tensor) -> None:
        if weight.ndim != 2 or bias.shape != (weight.shape[1],):
            raise DimensionError(
                "Weight (embed_dim, n_classes) and bias (n_classes,) are expected, "
                "but given {} and {}.".format(weight.shape, bias.shape)
            )

        self.weight = weight
        self.bias = bias

    def __repr__(self) -> str:
        s = "LinearHead("
        s += "embed_dim={}".format(self.embed_dim)
        s += ", n_classes={}".format(self.n_classes)
        s += ")"

        return s

    @property
    def embed_dim(self) -> int:
        return self.weight.shape[0]

    @property
    def n_classes(self) -> int:
        return self.weight.shape[1]

    def parameters(self) -> List[Tensor]:
        return [self.weight, self.bias]

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {"head.weight": self.weight.data.copy(), "head.bias": self.bias.data.copy()}

    @classmethod
    def from_state_dict(cls, state: Dict[str, np.ndarray], requires_grad: bool = True):
        return cls(
            Tensor(state["head.weight"], requires_grad=requires_grad, name="head.weight"),
            Tensor(state["head.bias"], requires_grad=requires_grad, name="head.bias"),
        )

    def __call__(self, embeddings: Tensor) -> Tensor:
        return head_logits(self, embeddings)


def build_head(
    embed_dim: int, n_classes: int, rng: Optional[RngStream] = None, init: str = "zeros"
) -> LinearHead:
    r"""Build a trainable linear head.

    Args:
        embed_dim (int):
            Input dimension.
        n_classes (int):
            Number of classes.
        rng (RngStream, optional):
            Stream of the weight draws. Required when ``init="normal"``.
        init (str):
            ``"zeros"`` or ``"normal"`` (std :math:`1/\sqrt{d}`). Default: ``"zeros"``.

    Returns:
        LinearHead with ``requires_grad=True``.
    """
    if n_classes < 1 or embed_dim < 1:
        raise DomainError(
            "embed_dim and n_classes should be positive, but given {} and {}.".format(
                embed_dim, n_classes
            )
        )

    if init == "zeros":
        weight = np.zeros((embed_dim, n_classes))
    elif init == "normal":
        if rng is None:
            raise ValueError("rng is required when init='normal'.")

        weight = rng.standard_normal(size=(embed_dim, n_classes)) / np.sqrt(embed_dim)
    else:
        raise NotImplementedError("Not support {}.".format(init))

    return LinearHead(
        Tensor(weight, requires_grad=True, name="head.weight"),
        Tensor(np.zeros(n_classes), requires_grad=True, name="head.bias"),
    )


def head_logits(head: LinearHead, embeddings: Tensor) -> Tensor:
    r"""Compute ``embeddings @ weight + bias``.

    Args:
        head (LinearHead):
            Linear head.
        embeddings (Tensor):
            Embeddings with shape of (batch_size, embed_dim).

    Returns:
        Tensor of logits with shape of (batch_size, n_classes).
    """
    if embeddings.ndim != 2 or embeddings.shape[1] != head.embed_dim:
        raise DimensionError(
            "Embeddings of dimension {} are expected, but given shape of {}.".format(
                head.embed_dim, embeddings.shape
            )
        )

    return F.affine(embeddings, head.weight, head.bias)
