from typing import Union

import numpy as np

from ..errors import DataError, DimensionError, DomainError
from ..numerics import Tensor

__all__ = ["topk_accuracy", "roc_auc"]

ArrayLike = Union[np.ndarray, Tensor]


def _as_array(logits: ArrayLike) -> np.ndarray:
    if isinstance(logits, Tensor):
        return logits.numpy()

    return np.asarray(logits)


def _check_labels(labels: np.ndarray, n_samples: int, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels)

    if labels.shape != (n_samples,):
        raise DimensionError(
            "Labels with shape of ({},) are expected, but given {}.".format(n_samples, labels.shape)
        )

    if np.any(labels < 0) or np.any(labels >= n_classes):
        raise DataError("Labels should be in [0, {}).".format(n_classes))

    return labels.astype(np.int64)


def topk_accuracy(logits: ArrayLike, labels: np.ndarray, k: int = 1) -> float:
    r"""Fraction of samples whose label is among the ``k`` highest logits.

    Ties are ranked by class index: among equal logits, the lower index comes first.

    Args:
        logits (numpy.ndarray or Tensor):
            Logits with shape of (n_samples, n_classes).
        labels (numpy.ndarray):
            Labels in ``[0, n_classes)``.
        k (int):
            Number of top ranks with :math:`1\leq k\leq C`. Default: ``1``.

    Returns:
        Accuracy in [0, 1].

    Examples:

        .. code-block:: python

            >>> import numpy as np
            >>> from rinv.evaluation import topk_accuracy
            >>> topk_accuracy(np.zeros((4, 3)), np.zeros(4, dtype=int))
            1.0
    """
    logits = _as_array(logits)

    if logits.ndim != 2:
        raise DimensionError(
            "Logits with shape of (n_samples, n_classes) are expected, "
            "but given {}.".format(logits.shape)
        )

    n_samples, n_classes = logits.shape

    if not 1 <= k <= n_classes:
        raise DomainError("k should be in [1, {}], but given {}.".format(n_classes, k))

    if n_samples == 0:
        raise DataError("Accuracy of an empty set is undefined.")

    labels = _check_labels(labels, n_samples, n_classes)

    ranking = np.argsort(-logits, axis=1, kind="stable")[:, :k]
    hits = np.any(ranking == labels[:, np.newaxis], axis=1)

    return float(np.mean(hits))


def roc_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    r"""Area under the ROC curve of a binary task by the rank-sum method.

    Tied scores share their average rank, which amounts to the trapezoidal rule.

    .. math::
        \mathrm{AUC} = \frac{\sum_{i:y_{i}=1}\mathrm{rank}_{i} - n_{+}(n_{+}+1)/2}{n_{+}n_{-}}

    Args:
        scores (numpy.ndarray):
            Scores of the positive class with shape of (n_samples,).
        labels (numpy.ndarray):
            Labels in ``{0, 1}``.

    Returns:
        AUC in [0, 1].
    """
    scores = np.asarray(scores, dtype=np.float64)

    if scores.ndim != 1:
        raise DimensionError("Scores should be 1-D, but given {}.".format(scores.shape))

    labels = _check_labels(labels, len(scores), 2)
    n_positive = int(np.sum(labels == 1))
    n_negative = len(labels) - n_positive

    if n_positive == 0 or n_negative == 0:
        raise DataError(
            "AUC needs both classes, but given {} positives of {}.".format(n_positive, len(labels))
        )

    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    starts = np.cumsum(counts) - counts
    ranks = (starts + (counts + 1) / 2)[inverse]

    rank_sum = np.sum(ranks[labels == 1])

    return float((rank_sum - n_positive * (n_positive + 1) / 2) / (n_positive * n_negative))
