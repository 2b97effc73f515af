from dataclasses import asdict, dataclass
from typing import Any, Dict, List

import numpy as np

from ..corruptions import ImageBatch
from ..encoders import EncoderModel
from ..errors import ConfigError, ContractError
from ..numerics import Tensor
from ..numerics import functional as F
from .functional import loss_mse, training_loss
from .similarity import similarity_matrix, uniformity_weights
from .spec import LossSpec

__all__ = ["GradientDecompositionReport", "gradient_decomposition_check"]


@dataclass
class GradientDecompositionReport:
    r"""Comparison of the loss gradient with its pull and push parts.

    Attributes:
        max_relative_deviation (float):
            Largest norm of the per-parameter deviation relative to the total gradient norm.
        row_sum_error (float):
            Largest deviation of a weight row sum from one.
        total_norm (float):
            Norm of the gradient of the full loss.
        pull_norm (float):
            Norm of the pull part.
        push_norm (float):
            Norm of the push part. Zero for the MSE family.
    """

    max_relative_deviation: float
    row_sum_error: float
    total_norm: float
    pull_norm: float
    push_norm: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _gradients(student: EncoderModel, loss_fn) -> List[np.ndarray]:
    student.zero_grad()
    loss = loss_fn(student)
    loss.backward()

    return [param.grad.astype(np.float64).copy() for param in student.parameters()]


def gradient_decomposition_check(
    student: EncoderModel, batch: ImageBatch, R_emb: Tensor, spec: LossSpec
) -> GradientDecompositionReport:
    r"""Check the pull/push decomposition of the contrastive gradient.

    For the ``student_vs_teacher`` variant,

    .. math::
        \nabla\hat{\mathcal{L}}^{\mathrm{contr}}
        = \frac{1}{\tau}\nabla\hat{\mathcal{L}}^{\mathrm{MSE}}
        + \frac{1}{\tau N}\sum_{i}\sum_{j}w_{i}(j)\nabla K(i,j),

    where :math:`\hat{\mathcal{L}}^{\mathrm{MSE}}=-\frac{1}{N}\sum_{i}K(i,i)`
    and the weights :math:`w_{i}(j)` are held constant.
    Every side is obtained by its own backward pass w.r.t. the student's parameters.

    Args:
        student (EncoderModel):
            Trainable student. Its gradients are overwritten.
        batch (ImageBatch):
            Normalized batch fed to the student.
        R_emb (Tensor):
            Teacher embeddings with shape of (N, d).
        spec (LossSpec):
            ``family="mse"`` or ``variant="student_vs_teacher"``.

    Returns:
        GradientDecompositionReport.
    """
    if student.frozen:
        raise ContractError("Gradients of a frozen student are not tracked.")

    if spec.family == "contrastive" and spec.variant != "student_vs_teacher":
        raise ConfigError(
            "The decomposition is stated for student_vs_teacher, but given {}.".format(spec.variant)
        )

    R_emb = R_emb.detach()
    total = _gradients(student, lambda model: training_loss(model.embed(batch), R_emb, spec))

    if spec.family == "mse":
        pull = _gradients(student, lambda model: loss_mse(model.embed(batch), R_emb))
        push = [np.zeros_like(grad) for grad in pull]
        row_sum_error = 0.0
    else:
        pull = _gradients(
            student, lambda model: F.scale(loss_mse(model.embed(batch), R_emb), 1 / spec.tau)
        )

        S_emb = student.embed(batch)
        weights = uniformity_weights(similarity_matrix(S_emb, R_emb, tau=spec.tau)).w
        row_sum_error = float(np.max(np.abs(weights.sum(axis=1) - 1)))
        n_samples = weights.shape[0]

        def push_fn(model: EncoderModel) -> Tensor:
            K = similarity_matrix(model.embed(batch), R_emb, tau=spec.tau).K
            weighted = F.sum(F.mul(K, weights.astype(K.dtype)))

            return F.scale(weighted, 1 / (spec.tau * n_samples))

        push = _gradients(student, push_fn)

    student.zero_grad()

    total_norm = np.sqrt(sum(np.sum(grad**2) for grad in total))
    scale = max(total_norm, np.finfo(np.float64).tiny)
    deviation = max(
        np.linalg.norm(g - (p + q)) / scale for g, p, q in zip(total, pull, push)
    )

    return GradientDecompositionReport(
        max_relative_deviation=float(deviation),
        row_sum_error=row_sum_error,
        total_norm=float(total_norm),
        pull_norm=float(np.sqrt(sum(np.sum(grad**2) for grad in pull))),
        push_norm=float(np.sqrt(sum(np.sum(grad**2) for grad in push))),
    )
