import logging
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DimensionError, DomainError
from ..numerics import RngStream
from ..special import logsumexp, softmax, unit_rows
from .embedding_set import EmbeddingSet, f_i

__all__ = [
    "RecoveryRow",
    "RecoveryResult",
    "project_tangent",
    "random_unit_vectors",
    "recover_embedding",
    "recover_all",
    "GRADIENT_TOLERANCE",
]

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-9
ARMIJO = 1e-4
MAX_HALVINGS = 60


@dataclass
class RecoveryRow:
    r"""Outcome of minimizing :math:`F_{i}` on the sphere for one row.

    Attributes:
        index (int):
            Row index :math:`i`.
        recovered (numpy.ndarray):
            Final iterate with shape of (d,).
        cosine_to_target (float):
            :math:`\langle x,R_{i}\rangle` in [-1, 1].
        objective_gap (float):
            :math:`F_{i}(x)-F_{i}(R_{i})`.
        iterations (int):
            Number of accepted steps.
        converged (bool):
            Whether the tangential gradient fell below the tolerance.
    """

    index: int
    recovered: np.ndarray
    cosine_to_target: float
    objective_gap: float
    iterations: int
    converged: bool


@dataclass
class RecoveryResult:
    r"""Recovery of every row of an embedding set."""

    recovered: np.ndarray
    cosine_to_target: np.ndarray
    objective_gap: np.ndarray
    iterations: int
    converged: bool
    rows: List[RecoveryRow] = field(default_factory=list)


def project_tangent(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    r"""Project ``g`` onto the tangent space of the sphere at unit ``x`` (row-wise)."""
    return g - np.sum(g * x, axis=-1, keepdims=True) * x


def random_unit_vectors(rng: RngStream, n: int, dim: int) -> np.ndarray:
    r"""Draw ``n`` vectors uniformly from the unit sphere in ``dim`` dimensions."""
    while True:
        x = rng.standard_normal(size=(n, dim))

        # redraw in the measure-zero event of a vanishing row
        if np.all(np.linalg.norm(x, axis=1) > 1e-12):
            return unit_rows(x)


def _log_excess(x: np.ndarray, i: int, embedding_set: EmbeddingSet) -> Tuple[float, np.ndarray]:
    r"""Value and Euclidean gradient of
    :math:`\psi_{i}(x)=\log\sum_{j\neq i}\exp(\langle x,R_{j}-R_{i}\rangle/\tau)`.

    :math:`F_{i}=\tau\log(1+e^{\psi_{i}})`, so both share minimizers.
    """
    R, tau = embedding_set.R, embedding_set.tau
    differences = np.delete(R, i, axis=0) - R[i]
    logits = differences @ x / tau
    value = float(logsumexp(logits))
    grad = softmax(logits) @ differences / tau

    return value, grad


def recover_embedding(
    i: int,
    embedding_set: EmbeddingSet,
    rng: Optional[RngStream] = None,
    max_iters: int = 10000,
    step: Optional[float] = None,
    start: Optional[np.ndarray] = None,
    tol: float = GRADIENT_TOLERANCE,
) -> RecoveryRow:
    r"""Minimize :math:`F_{i}` on the unit sphere by projected gradient descent.

    The descent runs on the log-excess :math:`\psi_{i}`, a strictly increasing
    transform of :math:`F_{i}` whose gradient does not vanish where :math:`F_{i}`
    is flat. Every step starts from ``step`` and is halved until the Armijo
    condition holds; the iterate is renormalized after each step.

    Args:
        i (int):
            Row index.
        embedding_set (EmbeddingSet):
            Target embeddings. Results for unbalanced sets are advisory.
        rng (RngStream, optional):
            Stream of the random start. Required unless ``start`` is given.
        max_iters (int):
            Maximum number of steps. Default: ``10000``.
        step (float, optional):
            Initial step size of every iteration. ``0.1 * tau`` by default.
        start (numpy.ndarray, optional):
            Start point with shape of (d,). Normalized before use.
        tol (float):
            Tolerance of the tangential gradient norm. Default: ``1e-9``.

    Returns:
        RecoveryRow.
    """
    embedding_set._check_index(i)

    if not embedding_set.balanced:
        warnings.warn(
            "Embedding set is not balanced (imbalance={:.3e}), so recovery is advisory.".format(
                embedding_set.imbalance
            ),
            UserWarning,
        )

    if step is None:
        step = 0.1 * embedding_set.tau

    if step <= 0:
        raise DomainError("step should be positive, but given {}.".format(step))

    target = embedding_set.R[i]

    if start is None:
        if rng is None:
            raise ValueError("Either rng or start should be given.")

        x = random_unit_vectors(rng, 1, embedding_set.dim)[0]
    else:
        start = np.asarray(start, dtype=np.float64)

        if start.shape != target.shape:
            raise DimensionError(
                "start should have shape of {}, but given {}.".format(target.shape, start.shape)
            )

        x = unit_rows(start[np.newaxis])[0]

    converged = False
    n_iter = 0

    if embedding_set.n_embeddings == 1:
        # F_i is constant
        converged = True
    else:
        value, grad = _log_excess(x, i, embedding_set)

        while n_iter < max_iters:
            tangent = project_tangent(x, grad)
            grad_norm = np.linalg.norm(tangent)

            if grad_norm < tol:
                converged = True
                break

            eta = step
            accepted = False

            for _ in range(MAX_HALVINGS):
                candidate = unit_rows((x - eta * tangent)[np.newaxis])[0]
                candidate_value, candidate_grad = _log_excess(candidate, i, embedding_set)

                if candidate_value <= value - ARMIJO * eta * grad_norm**2:
                    accepted = True
                    break

                eta /= 2

            if not accepted:
                # no decrease is representable in floating point
                break

            x, value, grad = candidate, candidate_value, candidate_grad
            n_iter += 1

    cosine = float(np.clip(x @ target, -1, 1))
    gap = f_i(x, i, embedding_set) - f_i(target, i, embedding_set)

    logger.debug(
        "row %d: iterations=%d converged=%s cosine=%.12f gap=%.3e",
        i,
        n_iter,
        converged,
        cosine,
        gap,
    )

    return RecoveryRow(
        index=i,
        recovered=x,
        cosine_to_target=cosine,
        objective_gap=float(gap),
        iterations=n_iter,
        converged=converged,
    )


def recover_all(
    embedding_set: EmbeddingSet, rng: RngStream, max_iters: int = 10000
) -> RecoveryResult:
    r"""Run :func:`recover_embedding` for every row, each from its own child stream."""
    rows = [
        recover_embedding(i, embedding_set, rng=rng.split("row{}".format(i)), max_iters=max_iters)
        for i in range(embedding_set.n_embeddings)
    ]

    return RecoveryResult(
        recovered=np.stack([row.recovered for row in rows]),
        cosine_to_target=np.array([row.cosine_to_target for row in rows]),
        objective_gap=np.array([row.objective_gap for row in rows]),
        iterations=max(row.iterations for row in rows),
        converged=all(row.converged for row in rows),
        rows=rows,
    )
