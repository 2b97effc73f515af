import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from ..corruptions import ForwardOperator, ImageBatch, apply
from ..encoders import EncoderModel, LinearHead, embed, head_logits
from ..errors import ConfigError, ContractError, DataError, DimensionError
from ..numerics import RngStream
from ..training import TrainConfig, train_probe
from ..transform import DEFAULT_MEAN, DEFAULT_STD, normalize
from ..utils.dataset import Dataset, LabelShiftMap
from .metrics import roc_auc, topk_accuracy
from .report import EvalReport, summarize

__all__ = [
    "supported_metrics",
    "resolve_threads",
    "evaluate",
    "evaluate_metrics",
    "severity_sweep",
    "label_efficiency_sweep",
    "label_shift_eval",
    "transfer_eval",
    "clean_probe_transfer",
]

logger = logging.getLogger(__name__)

supported_metrics = ["top1", "top5", "auc"]


def resolve_threads(n_threads: Optional[int] = None) -> int:
    r"""Number of evaluation threads: ``n_threads``, else ``RINV_THREADS``, else 1."""
    if n_threads is None:
        value = os.environ.get("RINV_THREADS", "1")

        try:
            n_threads = int(value)
        except ValueError as e:
            raise ConfigError(
                "RINV_THREADS should be an integer, but given {}.".format(value)
            ) from e

    if n_threads < 1:
        raise ConfigError("Number of threads should be positive, but given {}.".format(n_threads))

    return n_threads


def _logits(
    encoder: EncoderModel,
    head: LinearHead,
    dataset: Dataset,
    operator: ForwardOperator,
    rng: RngStream,
    batch_size: int,
    mean,
    std,
) -> np.ndarray:
    logits = []

    for batch_idx, indices in enumerate(dataset.batch_indices(batch_size)):
        batch = ImageBatch(dataset.images[indices].astype(encoder.dtype))
        batch = apply(operator, batch, rng.split("batch{}".format(batch_idx)))
        batch = normalize(batch, mean, std)
        logits.append(head_logits(head, embed(encoder, batch)).numpy())

    return np.concatenate(logits, axis=0)


def _score(logits: np.ndarray, labels: np.ndarray, metric: str) -> float:
    if metric == "top1":
        return topk_accuracy(logits, labels, k=1)
    elif metric == "top5":
        return topk_accuracy(logits, labels, k=min(5, logits.shape[1]))
    elif metric == "auc":
        if logits.shape[1] != 2:
            raise ConfigError(
                "AUC needs a binary task, but given {} classes.".format(logits.shape[1])
            )

        return roc_auc(logits[:, 1] - logits[:, 0], labels)

    raise NotImplementedError("Not support {}.".format(metric))


def evaluate_metrics(
    encoder: EncoderModel,
    head: LinearHead,
    dataset: Dataset,
    operator: ForwardOperator,
    metric_names: Sequence[str] = ("top1",),
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    model: str = "model",
    batch_size: int = 256,
    mean=DEFAULT_MEAN,
    std=DEFAULT_STD,
    n_threads: Optional[int] = None,
    label_fraction: Optional[float] = None,
) -> List[EvalReport]:
    r"""Evaluate several metrics over the same corruption instantiations.

    Instantiation ``k`` corrupts with ``rng.split("instantiation<k>")``. Instantiations may
    run in ``n_threads`` threads; values are merged in instantiation order.
    """
    if n_instantiations < 1:
        raise ConfigError(
            "n_instantiations should be positive, but given {}.".format(n_instantiations)
        )

    for name in metric_names:
        if name not in supported_metrics:
            raise NotImplementedError("Not support {}.".format(name))

    if not dataset.labeled:
        raise DataError("Evaluation needs labels.")

    if len(dataset) == 0:
        raise DataError("Dataset {} is empty.".format(dataset.name))

    if head.embed_dim != encoder.config.embed_dim:
        raise DimensionError(
            "Head takes {}-D embeddings, but the encoder gives {}-D ones.".format(
                head.embed_dim, encoder.config.embed_dim
            )
        )

    if rng is None:
        rng = RngStream(0, "evaluate")

    encoder = encoder if encoder.frozen else encoder.copy(frozen=True)

    deterministic = operator.is_deterministic
    n_effective = 1 if deterministic else n_instantiations

    def run(idx: int) -> List[float]:
        logits = _logits(
            encoder,
            head,
            dataset,
            operator,
            rng.split("instantiation{}".format(idx)),
            batch_size,
            mean,
            std,
        )

        return [_score(logits, dataset.labels, name) for name in metric_names]

    n_threads = min(resolve_threads(n_threads), n_effective)

    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as executor:
            scores = list(executor.map(run, range(n_effective)))
    else:
        scores = [run(idx) for idx in range(n_effective)]

    reports = []

    for metric_idx, name in enumerate(metric_names):
        values = [float(score[metric_idx]) for score in scores]
        metric_mean, stderr = summarize(values, deterministic)
        report = EvalReport(
            model=model,
            operator=operator.describe(),
            metric=name,
            values=values,
            mean=metric_mean,
            stderr=stderr,
            n=n_effective,
            seed=rng.seed,
            severity=operator.severity,
            label_fraction=label_fraction,
        )
        logger.info("%r", report)
        reports.append(report)

    return reports


def evaluate(
    encoder: EncoderModel,
    head: LinearHead,
    dataset: Dataset,
    operator: ForwardOperator,
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    metric: str = "top1",
    **kwargs
) -> EvalReport:
    r"""Metric of ``head`` on ``encoder`` over corrupted images.

    The full evaluation pass is repeated for ``n_instantiations`` fresh corruption streams.
    Deterministic operators (e.g. a fixed blur) run once and report no standard error.
    Preprocessing is corruption followed by normalization, without augmentation.

    Args:
        encoder (EncoderModel):
            Encoder of clean or corrupted images.
        head (LinearHead):
            Classifier on top of the embeddings.
        dataset (Dataset):
            Labeled evaluation set.
        operator (ForwardOperator):
            Forward operator applied before normalization.
        n_instantiations (int):
            Number of corruption instantiations. Default: ``10``.
        rng (RngStream, optional):
            Parent stream of the instantiations.
        metric (str):
            ``"top1"``, ``"top5"``, or ``"auc"``. Default: ``"top1"``.
        kwargs:
            ``model``, ``batch_size``, ``mean``, ``std``, ``n_threads``, and ``label_fraction``.

    Returns:
        EvalReport.
    """
    (report,) = evaluate_metrics(
        encoder,
        head,
        dataset,
        operator,
        metric_names=[metric],
        n_instantiations=n_instantiations,
        rng=rng,
        **kwargs
    )

    return report


def severity_sweep(
    encoder: EncoderModel,
    head: LinearHead,
    dataset: Dataset,
    operator: ForwardOperator,
    severities: Sequence,
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    **kwargs
) -> List[EvalReport]:
    r"""Evaluate at every fixed severity of ``operator``.

    Severities may lie above or below the training range. Every severity reuses ``rng``,
    so a single-entry sweep reproduces :func:`evaluate`.
    """
    return [
        evaluate(
            encoder,
            head,
            dataset,
            operator.with_severity(severity),
            n_instantiations=n_instantiations,
            rng=rng,
            **kwargs
        )
        for severity in severities
    ]


def label_efficiency_sweep(
    encoder: EncoderModel,
    dataset: Dataset,
    test_dataset: Dataset,
    fractions: Sequence[float],
    probe_config: TrainConfig,
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    **kwargs
) -> List[EvalReport]:
    r"""Train one probe per label fraction and evaluate each.

    Args:
        encoder (EncoderModel):
            Frozen encoder.
        dataset (Dataset):
            Labeled training set, subsampled per class.
        test_dataset (Dataset):
            Labeled evaluation set.
        fractions (sequence of float):
            Label fractions in (0, 1].
        probe_config (TrainConfig):
            Probe hyperparameters. Its operator corrupts both training and evaluation images.

    Returns:
        One EvalReport per fraction.
    """
    reports = []

    for fraction in fractions:
        config = probe_config.replace(label_fraction=fraction)
        head = train_probe(encoder, dataset, config)
        logger.info("Probe with label fraction %s trained.", fraction)
        reports.append(
            evaluate(
                encoder,
                head,
                test_dataset,
                config.operator,
                n_instantiations=n_instantiations,
                rng=rng,
                label_fraction=fraction,
                **kwargs
            )
        )

    return reports


def label_shift_eval(
    encoder: EncoderModel,
    head: LinearHead,
    external_dataset: Dataset,
    label_map: LabelShiftMap,
    operator: ForwardOperator,
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    **kwargs
) -> EvalReport:
    r"""Evaluate the training-task head on external classes relabeled by ``label_map``."""
    if len(external_dataset) == 0:
        raise DataError("External dataset {} is empty.".format(external_dataset.name))

    if not external_dataset.labeled:
        raise DataError("External dataset {} has no labels.".format(external_dataset.name))

    relabeled = external_dataset.replace(
        labels=label_map.relabel(external_dataset.labels),
        class_count=label_map.n_train_classes,
    )

    return evaluate(
        encoder, head, relabeled, operator, n_instantiations=n_instantiations, rng=rng, **kwargs
    )


def transfer_eval(
    encoder: EncoderModel,
    dataset: Dataset,
    test_dataset: Dataset,
    operator: ForwardOperator,
    probe_config: TrainConfig,
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    **kwargs
) -> List[EvalReport]:
    r"""Fit a fresh probe on a new task over fixed representations.

    The probe trains on ``dataset`` corrupted by ``operator`` and is evaluated on
    ``test_dataset`` under the same operator.

    Returns:
        Top-1 report, followed by AUC for binary tasks and top-5 when there are
        at least 5 classes.
    """
    if not encoder.frozen:
        raise ContractError("Transfer probes need a frozen encoder.")

    head = train_probe(encoder, dataset, probe_config.replace(operator=operator))

    metric_names = ["top1"]

    if head.n_classes == 2:
        metric_names.append("auc")

    if head.n_classes >= 5:
        metric_names.append("top5")

    return evaluate_metrics(
        encoder,
        head,
        test_dataset,
        operator,
        metric_names=metric_names,
        n_instantiations=n_instantiations,
        rng=rng,
        **kwargs
    )


def clean_probe_transfer(
    teacher: EncoderModel,
    student: EncoderModel,
    dataset: Dataset,
    test_dataset: Dataset,
    operator: ForwardOperator,
    probe_config: Optional[TrainConfig] = None,
    clean_head: Optional[LinearHead] = None,
    n_instantiations: int = 10,
    rng: Optional[RngStream] = None,
    **kwargs
) -> EvalReport:
    r"""Attach a probe trained on clean teacher embeddings to the student.

    Args:
        teacher (EncoderModel):
            Frozen teacher.
        student (EncoderModel):
            Robust student.
        dataset (Dataset):
            Clean labeled set on which the probe is trained if ``clean_head`` is not given.
        test_dataset (Dataset):
            Labeled evaluation set, corrupted by ``operator``.
        operator (ForwardOperator):
            Forward operator at evaluation.
        probe_config (TrainConfig, optional):
            Probe hyperparameters. Its operator is replaced by the identity.
        clean_head (LinearHead, optional):
            Probe already trained on clean teacher embeddings.

    Returns:
        EvalReport of the student with the clean probe, without retraining.
    """
    if clean_head is None:
        if probe_config is None:
            raise ConfigError("Either probe_config or clean_head is required.")

        clean_head = train_probe(
            teacher, dataset, probe_config.replace(operator=ForwardOperator.identity())
        )

    if clean_head.embed_dim != student.config.embed_dim:
        raise DimensionError(
            "Clean probe takes {}-D embeddings, but the student gives {}-D ones.".format(
                clean_head.embed_dim, student.config.embed_dim
            )
        )

    kwargs.setdefault("model", "student+clean_probe")

    return evaluate(
        student,
        clean_head,
        test_dataset,
        operator,
        n_instantiations=n_instantiations,
        rng=rng,
        **kwargs
    )
