from typing import Optional

import numpy as np

from ..errors import ContractError, DimensionError, DomainError
from ..special import logsumexp

__all__ = [
    "EmbeddingSet",
    "BALANCE_TOLERANCE",
    "log_h_r",
    "h_r",
    "f_i",
    "regular_simplex",
    "antipodal_pair",
]

BALANCE_TOLERANCE = 1e-6
UNIT_TOLERANCE = 1e-9


class EmbeddingSet:
    r"""Set of unit target embeddings :math:`R_{1},\ldots,R_{N}` with a temperature.

    Args:
        R (numpy.ndarray):
            Unit rows with shape of (N, d).
        tau (float):
            Temperature :math:`\tau>0`.

    Raises:
        ContractError: If a row does not have unit norm within ``1e-9``.
    """

    def __init__(self, R: np.ndarray, tau: float) -> None:
        R = np.array(R, dtype=np.float64)

        if R.ndim != 2 or R.shape[0] < 1:
            raise DimensionError("R should have shape of (N, d), but given {}.".format(R.shape))

        if not tau > 0:
            raise DomainError("tau should be positive, but given {}.".format(tau))

        norm = np.linalg.norm(R, axis=1)

        if np.any(np.abs(norm - 1) > UNIT_TOLERANCE):
            (rows,) = np.nonzero(np.abs(norm - 1) > UNIT_TOLERANCE)
            raise ContractError("Rows {} of R do not have unit norm.".format(rows.tolist()))

        self.R = R
        self.tau = float(tau)

    def __repr__(self) -> str:
        s = "EmbeddingSet("
        s += "n_embeddings={}".format(self.n_embeddings)
        s += ", dim={}".format(self.dim)
        s += ", tau={}".format(self.tau)
        s += ", balanced={}".format(self.balanced)
        s += ")"

        return s

    @property
    def n_embeddings(self) -> int:
        return self.R.shape[0]

    @property
    def dim(self) -> int:
        return self.R.shape[1]

    @property
    def imbalance(self) -> float:
        r""":math:`\|\sum_{j}R_{j}\|`."""
        return float(np.linalg.norm(self.R.sum(axis=0)))

    @property
    def balanced(self) -> bool:
        return self.imbalance < BALANCE_TOLERANCE

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.n_embeddings:
            raise DomainError(
                "Index should be in [0, {}), but given {}.".format(self.n_embeddings, i)
            )


def log_h_r(x: np.ndarray, embedding_set: EmbeddingSet) -> np.ndarray:
    r"""Compute :math:`\log H_{R}(x)=\log\sum_{j}\exp(\langle x,R_{j}\rangle/\tau)`.

    Args:
        x (numpy.ndarray):
            Unit vector with shape of (d,), or vectors with shape of (M, d).

    Returns:
        Scalar, or numpy.ndarray with shape of (M,).
    """
    x = np.asarray(x, dtype=np.float64)

    if x.shape[-1] != embedding_set.dim:
        raise DimensionError(
            "Vectors of dimension {} are expected, but given {}.".format(embedding_set.dim, x.shape)
        )

    return logsumexp(x @ embedding_set.R.T / embedding_set.tau, axis=-1)


def h_r(x: np.ndarray, embedding_set: EmbeddingSet) -> float:
    r"""Compute :math:`H_{R}(x)=\sum_{j}\exp(\langle x,R_{j}\rangle/\tau)`.

    Examples:

        .. code-block:: python

            >>> import numpy as np
            >>> from rinv.theory import EmbeddingSet, h_r
            >>> embedding_set = EmbeddingSet(np.eye(2), tau=1.0)
            >>> round(h_r(np.array([1.0, 0.0]), embedding_set), 6)
            3.718282
    """
    return float(np.exp(log_h_r(x, embedding_set)))


def f_i(x: np.ndarray, i: int, embedding_set: EmbeddingSet) -> float:
    r"""Per-row objective

    .. math::
        F_{i}(x) = -\langle x,R_{i}\rangle + \tau\log H_{R}(x).

    Args:
        x (numpy.ndarray):
            Unit vector with shape of (d,).
        i (int):
            Row index.
        embedding_set (EmbeddingSet):
            Target embeddings.

    Returns:
        Value of :math:`F_{i}(x)`.
    """
    embedding_set._check_index(i)
    x = np.asarray(x, dtype=np.float64)

    return float(-x @ embedding_set.R[i] + embedding_set.tau * log_h_r(x, embedding_set))


def regular_simplex(n: int, dim: Optional[int] = None) -> np.ndarray:
    r"""Vertices of a regular simplex centered at the origin.

    Args:
        n (int):
            Number of vertices :math:`n\geq 2`.
        dim (int, optional):
            Ambient dimension, at least ``n - 1``. ``n - 1`` by default.

    Returns:
        numpy.ndarray of unit rows with shape of (n, dim). Pairwise inner
        products are :math:`-1/(n-1)` and the rows sum to zero.
    """
    if n < 2:
        raise DomainError("n should be at least 2, but given {}.".format(n))

    if dim is None:
        dim = n - 1

    if dim < n - 1:
        raise DomainError("dim should be at least {}, but given {}.".format(n - 1, dim))

    centered = np.eye(n) - 1 / n

    # orthonormal basis of the hyperplane orthogonal to the all-ones vector
    basis, _, _ = np.linalg.svd(centered)
    vertices = centered @ basis[:, : n - 1]
    vertices /= np.linalg.norm(vertices, axis=1, keepdims=True)

    output = np.zeros((n, dim))
    output[:, : n - 1] = vertices

    return output


def antipodal_pair(dim: int = 2) -> np.ndarray:
    r"""Rows :math:`e_{1}` and :math:`-e_{1}` in ``dim`` dimensions."""
    if dim < 1:
        raise DomainError("dim should be positive, but given {}.".format(dim))

    output = np.zeros((2, dim))
    output[0, 0], output[1, 0] = 1, -1

    return output
