from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, DimensionError, DomainError
from ..numerics import Tensor, get_precision
from ..numerics import functional as F
from ..special import softmax

__all__ = [
    "SimilarityMatrix",
    "UniformityWeights",
    "similarity_matrix",
    "uniformity_weights",
    "check_unit_rows",
]

unit_tolerance = {"f64": 1e-6, "f32": 1e-4}


def check_unit_rows(input: Tensor, name: str = "embeddings") -> None:
    r"""Raise :class:`~rinv.errors.ContractError` unless every row has unit norm."""
    if input.ndim != 2:
        raise DimensionError("{} should be 2D, but given shape of {}.".format(name, input.shape))

    norm = np.linalg.norm(input.data.astype(np.float64), axis=1)
    tol = unit_tolerance[get_precision()]

    if np.any(np.abs(norm - 1) > tol):
        (rows,) = np.nonzero(np.abs(norm - 1) > tol)
        raise ContractError("Rows {} of {} do not have unit norm.".format(rows.tolist(), name))


@dataclass
class SimilarityMatrix:
    r"""Student-teacher similarities :math:`K(i,j)=\langle S_{i},R_{j}\rangle`.

    Attributes:
        K (Tensor):
            Similarities with shape of (N, N).
        tau (float):
            Temperature.
    """

    K: Tensor
    tau: float = 0.1


@dataclass
class UniformityWeights:
    r"""Row-stochastic weights :math:`w_{i}(j)`, shape of (N, N)."""

    w: np.ndarray


def similarity_matrix(S_emb: Tensor, R_emb: Tensor, tau: float = 0.1) -> SimilarityMatrix:
    r"""Similarity kernel of student and teacher embeddings.

    Args:
        S_emb (Tensor):
            Unit student embeddings with shape of (N, d).
        R_emb (Tensor):
            Unit teacher embeddings with shape of (N, d).
        tau (float):
            Temperature stored along with the kernel. Default: ``0.1``.

    Returns:
        SimilarityMatrix with ``K = S_emb @ R_emb.T``.
    """
    if S_emb.ndim != 2 or S_emb.shape != R_emb.shape:
        raise DimensionError(
            "Student and teacher embeddings should have the same 2D shape, "
            "but given {} and {}.".format(S_emb.shape, R_emb.shape)
        )

    if not tau > 0:
        raise DomainError("tau should be positive, but given {}.".format(tau))

    check_unit_rows(S_emb, name="student embeddings")
    check_unit_rows(R_emb, name="teacher embeddings")

    return SimilarityMatrix(F.matmul(S_emb, F.transpose(R_emb)), tau=tau)


def uniformity_weights(K: SimilarityMatrix) -> UniformityWeights:
    r"""Weights of the push term of the contrastive gradient.

    .. math::
        w_{i}(j) = \frac{\exp(K(i,j)/\tau)}{\sum_{k}\exp(K(i,k)/\tau)}

    Args:
        K (SimilarityMatrix):
            Student-teacher kernel.

    Returns:
        UniformityWeights whose rows sum to one.
    """
    return UniformityWeights(softmax(K.K.data.astype(np.float64) / K.tau, axis=1))
