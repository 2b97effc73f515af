import numpy as np
import pytest
from scipy.stats import mannwhitneyu

from rinv.errors import DataError, DimensionError, DomainError
from rinv.evaluation import roc_auc, topk_accuracy
from rinv.numerics import Tensor

parameters_n_samples = [10, 31]
parameters_n_classes = [2, 7]
parameters_k = [1, 2]
parameters_monotone = [np.exp, lambda logits: 3 * logits - 7, lambda logits: np.tanh(logits / 2)]


@pytest.mark.parametrize("n_samples", parameters_n_samples)
@pytest.mark.parametrize("n_classes", parameters_n_classes)
@pytest.mark.parametrize("k", parameters_k)
def test_topk_accuracy(n_samples: int, n_classes: int, k: int):
    rng = np.random.default_rng(0)

    logits = rng.standard_normal((n_samples, n_classes))
    labels = rng.integers(0, n_classes, size=n_samples)

    accuracy = topk_accuracy(logits, labels, k=k)

    expected = 0

    for logit, label in zip(logits, labels):
        expected += int(np.sum(logit > logit[label]) < k)

    assert 0 <= accuracy <= 1
    assert accuracy == pytest.approx(expected / n_samples)
    assert topk_accuracy(Tensor(logits), labels, k=k) == accuracy


def test_topk_accuracy_ties():
    logits = np.zeros((4, 3))

    assert topk_accuracy(logits, np.zeros(4, dtype=int)) == 1.0
    assert topk_accuracy(logits, np.full(4, 2)) == 0.0
    assert topk_accuracy(logits, np.full(4, 1), k=2) == 1.0
    assert topk_accuracy(logits, np.array([0, 1, 2, 2]), k=3) == 1.0


@pytest.mark.parametrize("transform", parameters_monotone)
@pytest.mark.parametrize("k", parameters_k)
def test_topk_accuracy_monotone(transform, k: int):
    rng = np.random.default_rng(k)

    # rounding keeps some ties, which a monotone map preserves
    logits = np.round(rng.standard_normal((40, 5)), 1)
    labels = rng.integers(0, 5, size=40)

    assert topk_accuracy(transform(logits), labels, k=k) == topk_accuracy(logits, labels, k=k)


def test_topk_accuracy_invalid():
    logits = np.zeros((4, 3))

    with pytest.raises(DomainError):
        topk_accuracy(logits, np.zeros(4, dtype=int), k=4)

    with pytest.raises(DomainError):
        topk_accuracy(logits, np.zeros(4, dtype=int), k=0)

    with pytest.raises(DimensionError):
        topk_accuracy(np.zeros(3), np.zeros(3, dtype=int))

    with pytest.raises(DimensionError):
        topk_accuracy(logits, np.zeros(5, dtype=int))

    with pytest.raises(DataError):
        topk_accuracy(logits, np.full(4, 3))

    with pytest.raises(DataError):
        topk_accuracy(np.zeros((0, 3)), np.zeros(0, dtype=int))


@pytest.mark.parametrize("n_samples", parameters_n_samples)
def test_roc_auc(n_samples: int):
    rng = np.random.default_rng(n_samples)

    # rounding produces ties
    scores = np.round(rng.standard_normal(n_samples), 1)
    labels = np.arange(n_samples) % 2

    auc = roc_auc(scores, labels)
    statistic = mannwhitneyu(scores[labels == 1], scores[labels == 0]).statistic

    n_positive = np.sum(labels == 1)
    n_negative = n_samples - n_positive

    assert auc == pytest.approx(statistic / (n_positive * n_negative))


def test_roc_auc_extremes():
    labels = np.array([0, 0, 1, 1])

    assert roc_auc(np.array([0.1, 0.2, 0.8, 0.9]), labels) == 1.0
    assert roc_auc(np.array([0.9, 0.8, 0.2, 0.1]), labels) == 0.0
    assert roc_auc(np.ones(4), labels) == 0.5


def test_roc_auc_invalid():
    with pytest.raises(DataError):
        roc_auc(np.arange(4.0), np.ones(4, dtype=int))

    with pytest.raises(DataError):
        roc_auc(np.arange(4.0), np.array([0, 1, 2, 1]))

    with pytest.raises(DimensionError):
        roc_auc(np.zeros((4, 2)), np.array([0, 1, 0, 1]))
