import logging
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..numerics import RngStream
from ..special import logsumexp
from .embedding_set import EmbeddingSet
from .recovery import random_unit_vectors, recover_embedding

__all__ = ["RowVerdict", "RecoveryVerificationReport", "verify_prop1"]

logger = logging.getLogger(__name__)

REJECTION_TOLERANCE = 1e-9
COSINE_TOLERANCE = 1e-6


@dataclass
class RowVerdict:
    r"""Verdict of one row.

    Attributes:
        index (int):
            Row index.
        min_sampled_gap (float):
            Smallest :math:`F_{i}(x)-F_{i}(R_{i})` over the sampled unit vectors.
        rejection_passed (bool):
            No sample undercuts :math:`F_{i}(R_{i})` by more than ``1e-9``.
        min_cosine (float):
            Smallest cosine to :math:`R_{i}` over the restarts of the descent.
        optimization_passed (bool):
            Every restart ends within cosine ``1 - 1e-6`` of :math:`R_{i}`.
    """

    index: int
    min_sampled_gap: float
    rejection_passed: bool
    min_cosine: float
    optimization_passed: bool

    @property
    def passed(self) -> bool:
        return self.rejection_passed and self.optimization_passed


@dataclass
class RecoveryVerificationReport:
    r"""Numerical check that every target row minimizes its per-row objective.

    When the set is not balanced, ``precondition_violated`` is ``True``
    and no row is tested.
    """

    n_embeddings: int
    dim: int
    tau: float
    imbalance: float
    precondition_violated: bool
    n_samples: int
    n_restarts: int
    rows: List[RowVerdict] = field(default_factory=list)

    @property
    def passed(self) -> Optional[bool]:
        r"""``None`` when skipped, otherwise whether every row passed."""
        if self.precondition_violated:
            return None

        return all(row.passed for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        output = asdict(self)
        output["passed"] = self.passed

        for row, verdict in zip(output["rows"], self.rows):
            row["passed"] = verdict.passed

        return output


def _sampled_gaps(
    embedding_set: EmbeddingSet, rng: RngStream, n_samples: int, chunk_size: int
) -> np.ndarray:
    R, tau = embedding_set.R, embedding_set.tau
    n_embeddings = embedding_set.n_embeddings

    # F_i(R_i) for every i
    logits = R @ R.T / tau
    reference = tau * (logsumexp(logits, axis=1) - np.diag(logits))
    min_gaps = np.full(n_embeddings, np.inf)

    for start in range(0, n_samples, chunk_size):
        size = min(chunk_size, n_samples - start)
        X = random_unit_vectors(rng, size, embedding_set.dim)
        logits = X @ R.T / tau

        # F_i(x) = tau * (log H_R(x) - <x, R_i> / tau)
        values = tau * (logsumexp(logits, axis=1)[:, np.newaxis] - logits)
        min_gaps = np.minimum(min_gaps, np.min(values - reference, axis=0))

    return min_gaps


def verify_prop1(
    embedding_set: EmbeddingSet,
    rng: RngStream,
    n_samples: int = 100000,
    n_restarts: int = 8,
    max_iters: int = 10000,
    chunk_size: int = 10000,
) -> RecoveryVerificationReport:
    r"""Check that each target row :math:`R_{i}` minimizes :math:`F_{i}` on the sphere.

    Two tests run per row:

    - rejection: no unit vector among ``n_samples`` uniform draws attains
      :math:`F_{i}` below :math:`F_{i}(R_{i})-10^{-9}`,
    - optimization: every one of ``n_restarts`` random-start descents
      ends within cosine :math:`1-10^{-6}` of :math:`R_{i}`.

    Args:
        embedding_set (EmbeddingSet):
            Target embeddings. Should be balanced.
        rng (RngStream):
            Stream of samples and start points.
        n_samples (int):
            Number of sampled unit vectors. Default: ``100000``.
        n_restarts (int):
            Number of descents per row. Default: ``8``.
        max_iters (int):
            Maximum number of steps per descent. Default: ``10000``.
        chunk_size (int):
            Number of samples evaluated at once. Default: ``10000``.

    Returns:
        RecoveryVerificationReport. If the set is not balanced, the report
        flags the violated precondition and contains no verdicts.
    """
    report = RecoveryVerificationReport(
        n_embeddings=embedding_set.n_embeddings,
        dim=embedding_set.dim,
        tau=embedding_set.tau,
        imbalance=embedding_set.imbalance,
        precondition_violated=not embedding_set.balanced,
        n_samples=n_samples,
        n_restarts=n_restarts,
    )

    if report.precondition_violated:
        logger.info("Skipped: the embedding set is not balanced (%.3e).", report.imbalance)

        return report

    min_gaps = _sampled_gaps(embedding_set, rng.split("samples"), n_samples, chunk_size)

    for i in range(embedding_set.n_embeddings):
        cosines = []

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)

            for k in range(n_restarts):
                row = recover_embedding(
                    i,
                    embedding_set,
                    rng=rng.split("restart/{}/{}".format(i, k)),
                    max_iters=max_iters,
                )
                cosines.append(row.cosine_to_target)

        verdict = RowVerdict(
            index=i,
            min_sampled_gap=float(min_gaps[i]),
            rejection_passed=bool(min_gaps[i] >= -REJECTION_TOLERANCE),
            min_cosine=float(min(cosines)) if len(cosines) > 0 else 1.0,
            optimization_passed=all(cosine > 1 - COSINE_TOLERANCE for cosine in cosines),
        )
        report.rows.append(verdict)

        logger.info(
            "row %d: min gap=%.3e, min cosine=%.12f, passed=%s",
            i,
            verdict.min_sampled_gap,
            verdict.min_cosine,
            verdict.passed,
        )

    return report
