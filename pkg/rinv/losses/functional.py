import numpy as np

from ..errors import BatchSizeError, DataError, DimensionError
from ..numerics import Tensor
from ..numerics import functional as F
from .similarity import check_unit_rows
from .spec import LossSpec

__all__ = [
    "loss_mse",
    "loss_uniformity",
    "loss_contrastive",
    "training_loss",
    "loss_cross_entropy",
]


def _check_pair(S_emb: Tensor, R_emb: Tensor) -> None:
    if S_emb.ndim != 2 or S_emb.shape != R_emb.shape:
        raise DimensionError(
            "Student and teacher embeddings should have the same 2D shape, "
            "but given {} and {}.".format(S_emb.shape, R_emb.shape)
        )

    check_unit_rows(S_emb, name="student embeddings")
    check_unit_rows(R_emb, name="teacher embeddings")


def _reduce(per_sample: Tensor, reduce: bool) -> Tensor:
    if reduce:
        return F.mean(per_sample)

    return per_sample


def loss_mse(S_emb: Tensor, R_emb: Tensor, per_sample: bool = False) -> Tensor:
    r"""Least-squares loss of unit embeddings with constants removed.

    .. math::
        \hat{\mathcal{L}}^{\mathrm{MSE}}
        = -\frac{1}{N}\sum_{i}\langle S_{i},R_{i}\rangle

    Args:
        S_emb (Tensor):
            Unit student embeddings with shape of (N, d).
        R_emb (Tensor):
            Unit teacher embeddings with shape of (N, d).
        per_sample (bool):
            If ``True``, return the (N,) terms instead of their mean.

    Returns:
        Scalar tensor, or tensor with shape of (N,).
    """
    _check_pair(S_emb, R_emb)

    return _reduce(-F.dot_rows(S_emb, R_emb), not per_sample)


def loss_uniformity(
    S_emb: Tensor, R_emb: Tensor, spec: LossSpec, per_sample: bool = False
) -> Tensor:
    r"""Uniformity term of the contrastive loss.

    With :math:`K_{\tau}(y,z)=\exp(\langle y,z\rangle/\tau)`, the variants are

    .. math::
        \mathrm{student\_vs\_teacher}&:
        \frac{1}{N}\sum_{i}\log\sum_{j}K_{\tau}(S_{i},R_{j}), \\
        \mathrm{student\_vs\_student}&:
        \frac{1}{N}\sum_{i}\log\sum_{j\neq i}K_{\tau}(S_{i},S_{j}), \\
        \mathrm{student\_vs\_both}&:
        \frac{1}{N}\sum_{i}\log\left(\sum_{j\neq i}K_{\tau}(S_{i},S_{j})
        + \sum_{j}K_{\tau}(S_{i},R_{j})\right),

    and ``nt_xent`` adds
    :math:`\log(\sum_{j}K_{\tau}(R_{i},S_{j})+\sum_{j\neq i}K_{\tau}(R_{i},R_{j}))`
    to every term of ``student_vs_both``.

    Args:
        S_emb (Tensor):
            Unit student embeddings with shape of (N, d).
        R_emb (Tensor):
            Unit teacher embeddings with shape of (N, d).
        spec (LossSpec):
            Selects the variant and temperature.
        per_sample (bool):
            If ``True``, return the (N,) terms instead of their mean.

    Returns:
        Scalar tensor, or tensor with shape of (N,).
    """
    _check_pair(S_emb, R_emb)

    n_samples = S_emb.shape[0]
    variant = spec.variant
    c = 1 / spec.tau

    if variant == "student_vs_teacher":
        logits = F.scale(F.matmul(S_emb, F.transpose(R_emb)), c)

        return _reduce(F.log_sum_exp_rows(logits), not per_sample)

    if n_samples < 2:
        raise BatchSizeError(
            "{} needs at least two samples, but given {}.".format(variant, n_samples)
        )

    off_diagonal = ~np.eye(n_samples, dtype=bool)
    student_student = F.scale(F.matmul(S_emb, F.transpose(S_emb)), c)

    if variant == "student_vs_student":
        return _reduce(F.log_sum_exp_rows(student_student, where=off_diagonal), not per_sample)

    student_teacher = F.scale(F.matmul(S_emb, F.transpose(R_emb)), c)
    where = np.concatenate([off_diagonal, np.ones_like(off_diagonal)], axis=1)
    student_anchored = F.log_sum_exp_rows(
        F.concat([student_student, student_teacher], axis=1), where=where
    )

    if variant == "student_vs_both":
        return _reduce(student_anchored, not per_sample)

    if variant == "nt_xent":
        teacher_student = F.scale(F.matmul(R_emb, F.transpose(S_emb)), c)
        teacher_teacher = F.scale(F.matmul(R_emb, F.transpose(R_emb)), c)
        where = np.concatenate([np.ones_like(off_diagonal), off_diagonal], axis=1)
        teacher_anchored = F.log_sum_exp_rows(
            F.concat([teacher_student, teacher_teacher], axis=1), where=where
        )

        return _reduce(student_anchored + teacher_anchored, not per_sample)

    raise NotImplementedError("Not support {}.".format(variant))


def loss_contrastive(
    S_emb: Tensor, R_emb: Tensor, spec: LossSpec, per_sample: bool = False
) -> Tensor:
    r"""Contrastive loss as explicit pull and push terms.

    .. math::
        \hat{\mathcal{L}}^{\mathrm{contr}}
        = \frac{1}{\tau}\hat{\mathcal{L}}^{\mathrm{MSE}} + \hat{\mathcal{L}}^{\mathrm{unif}}

    With ``variant="student_vs_teacher"``, this equals the cross entropy of
    :math:`\mathrm{softmax}_{j}(K(i,j)/\tau)` against the diagonal.

    Args:
        S_emb (Tensor):
            Unit student embeddings with shape of (N, d).
        R_emb (Tensor):
            Unit teacher embeddings with shape of (N, d).
        spec (LossSpec):
            Selects the uniformity variant and temperature.
        per_sample (bool):
            If ``True``, return the (N,) terms instead of their mean.

    Returns:
        Scalar tensor, or tensor with shape of (N,).

    Examples:

        .. code-block:: python

            >>> import numpy as np
            >>> from rinv.losses import LossSpec, loss_contrastive
            >>> from rinv.numerics import Tensor
            >>> E = Tensor(np.eye(2))
            >>> loss = loss_contrastive(E, E, LossSpec(tau=1.0))
            >>> round(loss.item(), 6)
            0.313262
    """
    pull = F.scale(loss_mse(S_emb, R_emb, per_sample=per_sample), 1 / spec.tau)
    push = loss_uniformity(S_emb, R_emb, spec, per_sample=per_sample)

    return pull + push


def training_loss(S_emb: Tensor, R_emb: Tensor, spec: LossSpec) -> Tensor:
    r"""Objective of student training selected by ``spec.family``."""
    if spec.family == "mse":
        return loss_mse(S_emb, R_emb)

    return loss_contrastive(S_emb, R_emb, spec)


def loss_cross_entropy(logits: Tensor, labels: np.ndarray) -> Tensor:
    r"""Mean cross entropy of logits against integer labels.

    Args:
        logits (Tensor):
            Logits with shape of (batch_size, n_classes).
        labels (numpy.ndarray):
            Labels in ``[0, n_classes)`` with shape of (batch_size,).

    Returns:
        Scalar tensor.
    """
    labels = np.asarray(labels)

    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise DimensionError(
            "Logits (batch_size, n_classes) and labels (batch_size,) are expected, "
            "but given {} and {}.".format(logits.shape, labels.shape)
        )

    n_classes = logits.shape[1]

    if np.any(labels < 0) or np.any(labels >= n_classes):
        raise DataError("Labels should be in [0, {}), but given {}.".format(n_classes, labels))

    one_hot = np.eye(n_classes, dtype=logits.dtype)[labels]
    target = F.sum(F.mul(logits, one_hot), axis=1)

    return F.mean(F.log_sum_exp_rows(logits) - target)
