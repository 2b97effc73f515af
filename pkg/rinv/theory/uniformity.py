import logging
import warnings
from typing import Tuple

import numpy as np

from ..errors import DomainError
from ..numerics import RngStream
from ..special import unit_rows
from .embedding_set import EmbeddingSet
from .recovery import project_tangent, random_unit_vectors

__all__ = ["uniformity_objective", "find_uniformity_minimizer", "MINIMIZER_BALANCE_TOLERANCE"]

logger = logging.getLogger(__name__)

MINIMIZER_BALANCE_TOLERANCE = 1e-4
ARMIJO = 1e-4
MAX_HALVINGS = 60


def uniformity_objective(R: np.ndarray, tau: float) -> float:
    r"""Uniformity objective of unit rows.

    .. math::
        U(R) = \sum_{i}\log\sum_{j}\exp(\langle R_{i},R_{j}\rangle/\tau)
    """
    return len(R) / tau + _shifted_objective(R, tau)[0]


def _shifted_objective(R: np.ndarray, tau: float) -> Tuple[float, np.ndarray]:
    r"""Value and Euclidean gradient of :math:`U(R)-N/\tau`.

    Every term is written as
    :math:`\log(1+\sum_{j\neq i}\exp((\langle R_{i},R_{j}\rangle-1)/\tau))`,
    whose exponents are nonpositive and whose value keeps its precision near the minimum.
    """
    gram = R @ R.T
    a = np.exp((gram - 1) / tau)
    np.fill_diagonal(a, 0)
    s = a.sum(axis=1)
    value = float(np.sum(np.log1p(s)))

    C = a / (1 + s[:, np.newaxis])
    grad = (C + C.T) @ R / tau

    return value, grad


def _descend(
    R: np.ndarray, tau: float, max_iters: int, tol: float
) -> Tuple[np.ndarray, float, int]:
    value, grad = _shifted_objective(R, tau)
    eta = tau
    n_iter = 0

    while n_iter < max_iters:
        tangent = project_tangent(R, grad)
        tangent_norm = np.linalg.norm(tangent)

        if tangent_norm <= tol * max(np.linalg.norm(grad), np.finfo(np.float64).tiny):
            break

        accepted = False

        for _ in range(MAX_HALVINGS):
            candidate = unit_rows(R - eta * tangent)
            candidate_value, candidate_grad = _shifted_objective(candidate, tau)

            if candidate_value <= value - ARMIJO * eta * tangent_norm**2:
                accepted = True
                break

            eta /= 2

        if not accepted:
            break

        R, value, grad = candidate, candidate_value, candidate_grad
        eta *= 2
        n_iter += 1

    return R, value, n_iter


def find_uniformity_minimizer(
    n: int,
    dim: int,
    tau: float,
    rng: RngStream,
    n_restarts: int = 8,
    max_iters: int = 20000,
    tol: float = 1e-10,
) -> EmbeddingSet:
    r"""Minimize the uniformity objective over ``n`` unit vectors.

    Projected gradient descent with Armijo backtracking and step growth
    runs from ``n_restarts`` random configurations; the best one is returned.

    Args:
        n (int):
            Number of vectors :math:`N\geq 2`.
        dim (int):
            Dimension :math:`d\geq 1`.
        tau (float):
            Temperature.
        rng (RngStream):
            Stream of the random starts.
        n_restarts (int):
            Number of restarts. Default: ``8``.
        max_iters (int):
            Maximum number of steps per restart. Default: ``20000``.
        tol (float):
            Tolerance of the tangential gradient norm relative to the full gradient norm.
            Default: ``1e-10``.

    Returns:
        EmbeddingSet of the best configuration. Its ``imbalance`` is checked
        against ``1e-4`` with a warning.
    """
    if n < 2:
        raise DomainError("n should be at least 2, but given {}.".format(n))

    if dim < 1:
        raise DomainError("dim should be positive, but given {}.".format(dim))

    if not tau > 0:
        raise DomainError("tau should be positive, but given {}.".format(tau))

    best_R, best_value = None, np.inf

    for k in range(n_restarts):
        start = random_unit_vectors(rng.split("restart{}".format(k)), n, dim)
        R, value, n_iter = _descend(start, tau, max_iters, tol)

        logger.debug("restart %d: value=%.15e, iterations=%d", k, value, n_iter)

        if value < best_value:
            best_R, best_value = R, value

    embedding_set = EmbeddingSet(unit_rows(best_R), tau)

    if embedding_set.imbalance > MINIMIZER_BALANCE_TOLERANCE:
        warnings.warn(
            "Uniformity minimizer has imbalance {:.3e} above {}.".format(
                embedding_set.imbalance, MINIMIZER_BALANCE_TOLERANCE
            ),
            UserWarning,
        )

    return embedding_set
