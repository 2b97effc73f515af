import logging
import time
from typing import Callable, Iterator, List, Optional, Union

import numpy as np

from ..corruptions import ImageBatch, apply
from ..encoders import (
    Classifier,
    EncoderConfig,
    EncoderModel,
    LinearHead,
    build_encoder,
    build_head,
    embed,
    student_from_teacher,
)
from ..errors import ConfigError, ContractError, DataError
from ..losses import loss_cross_entropy, training_loss
from ..numerics import Adam, RngStream, Tensor, cosine_lr, get_dtype, precision
from ..transform import DEFAULT_MEAN, DEFAULT_STD, normalize, random_crop_flip
from ..utils.dataset import Dataset, stratified_subset
from .base import EpochTrainerBase
from .config import RunRecord, TrainConfig

__all__ = [
    "TeacherTrainer",
    "StudentTrainer",
    "ProbeTrainer",
    "BaselineTrainer",
    "train_teacher",
    "train_student_contrastive",
    "train_probe",
    "train_baseline_e2e",
]

logger = logging.getLogger(__name__)

# floor of the cosine schedule as a fraction of lr_max
final_lr_fraction = 1e-4

Callbacks = Optional[
    Union[Callable[[EpochTrainerBase], None], List[Callable[[EpochTrainerBase], None]]]
]


class TrainerBase(EpochTrainerBase):
    r"""Minibatch Adam training with a cosine schedule.

    The schedule decays from ``lr_max`` on the first step to
    ``final_lr_fraction * lr_max`` on the last one.

    Every random draw comes from a stream seeded by ``config.seed`` and labeled
    ``"<role>/shuffle"``, ``"<role>/augment"``, ``"<role>/corruption"``, and so on,
    with one child per epoch and batch. Two runs differing only in their loss
    thus see identical batches, augmentations, and corruptions.

    Args:
        config (TrainConfig):
            Hyperparameters.
        callbacks (callable or list[callable], optional):
            Called before training and after every epoch with the trainer.
        record_loss (bool):
            Record the mean batch loss of every epoch. Default: ``True``.
        mean, std (float or numpy.ndarray):
            Normalization statistics applied after corruption.
    """

    role = "base"
    weight_decay_applies = True

    def __init__(
        self,
        config: TrainConfig,
        callbacks: Callbacks = None,
        record_loss: bool = True,
        mean=DEFAULT_MEAN,
        std=DEFAULT_STD,
    ) -> None:
        super().__init__(callbacks=callbacks, record_loss=record_loss)

        self.config = config
        self.mean = mean
        self.std = std
        self.rng = RngStream(config.seed, self.role)

        self.dataset = None
        self.optimizer = None
        self.step = 0
        self.total_steps = 0
        self.lr_history = []
        self.wall_clock = 0.0
        self.streams = set()

    def __repr__(self) -> str:
        s = "{}(".format(type(self).__name__)
        s += "epochs={epochs}"
        s += ", batch_size={batch_size}"
        s += ", lr_max={lr_max}"
        s += ", seed={seed}"
        s += ")"

        return s.format(**self.config.__dict__)

    @property
    def min_batch_size(self) -> int:
        return 1

    def stream(self, name: str, batch_idx: Optional[int] = None) -> RngStream:
        self.streams.add("{}/{}".format(self.rng.label, name))
        rng = self.rng.split(name).split("epoch{}".format(self.epoch))

        if batch_idx is not None:
            rng = rng.split("batch{}".format(batch_idx))

        return rng

    def n_batches(self, n_examples: int) -> int:
        n_full, rest = divmod(n_examples, self.config.batch_size)

        return n_full + (1 if rest >= self.min_batch_size else 0)

    def batches(self) -> Iterator[np.ndarray]:
        rng = self.stream("shuffle")

        for indices in self.dataset.batch_indices(self.config.batch_size, rng=rng):
            if len(indices) >= self.min_batch_size:
                yield indices

    def clean_images(self, indices: np.ndarray, batch_idx: int) -> np.ndarray:
        images = self.dataset.images[indices].astype(get_dtype())

        if self.config.augment:
            images = random_crop_flip(
                images, self.stream("augment", batch_idx), padding=self.config.crop_padding
            )

        return images

    def clean_batch(self, images: np.ndarray) -> ImageBatch:
        return normalize(ImageBatch(images), self.mean, self.std)

    def corrupted_batch(self, images: np.ndarray, batch_idx: int) -> ImageBatch:
        rng = self.stream("corruption", batch_idx)
        batch = apply(self.config.operator, ImageBatch(images), rng)

        return normalize(batch, self.mean, self.std)

    def fit(self, dataset: Dataset, parameters: List[Tensor]) -> None:
        r"""Train ``parameters`` on ``dataset`` for ``config.epochs`` epochs."""
        if len(dataset) < self.min_batch_size:
            raise DataError(
                "At least {} images are required, but given {}.".format(
                    self.min_batch_size, len(dataset)
                )
            )

        config = self.config
        self.dataset = dataset
        self.optimizer = Adam(
            parameters,
            lr=config.lr_max,
            weight_decay=config.weight_decay if self.weight_decay_applies else 0.0,
            weight_decay_mode=config.weight_decay_mode,
        )
        self.step = 0
        self.total_steps = config.epochs * self.n_batches(len(dataset))
        self.lr_history = []

        logger.info(
            "%s: %d images, %d steps, operator %s",
            self.role,
            len(dataset),
            self.total_steps,
            config.operator.describe(),
        )

        start = time.perf_counter()
        super().__call__(n_epochs=config.epochs)
        self.wall_clock = time.perf_counter() - start

    def update_once(self) -> float:
        losses = []

        for batch_idx, indices in enumerate(self.batches()):
            self.optimizer.zero_grad()
            loss = self.batch_loss(indices, batch_idx)
            loss.backward()

            lr = cosine_lr(self.step, max(self.total_steps - 1, 1), self.config.lr_max)
            lr = max(lr, final_lr_fraction * self.config.lr_max)
            self.optimizer.step(lr=lr)
            self.lr_history.append(lr)
            self.step += 1
            losses.append(loss.item())

        epoch_loss = float(np.mean(losses))
        logger.info(
            "%s epoch %d/%d: loss=%.6f", self.role, self.epoch + 1, self.config.epochs, epoch_loss
        )

        return epoch_loss

    def batch_loss(self, indices: np.ndarray, batch_idx: int) -> Tensor:
        raise NotImplementedError("Implement 'batch_loss' method.")

    def run_record(self, checkpoint: Optional[str] = None, **extra) -> RunRecord:
        return RunRecord(
            role=self.role,
            config=self.config.to_dict(),
            epoch_losses=list(self.loss) if self.loss is not None else [],
            lr_history=list(self.lr_history),
            n_examples=0 if self.dataset is None else len(self.dataset),
            streams=sorted(self.streams),
            wall_clock=self.wall_clock,
            checkpoint=checkpoint,
            extra=extra,
        )


class TeacherTrainer(TrainerBase):
    r"""Supervised pretraining of an encoder and a linear head on clean images."""

    role = "teacher"

    def __call__(self, dataset: Dataset, encoder_config: EncoderConfig) -> Classifier:
        if not dataset.labeled:
            raise DataError("Teacher pretraining needs labels.")

        if dataset.class_count < 2:
            raise DataError(
                "At least 2 classes are required, but given {}.".format(dataset.class_count)
            )

        if self.config.operator.kind != "identity":
            raise ConfigError(
                "The teacher trains on clean images, but operator {} is given.".format(
                    self.config.operator.describe()
                )
            )

        with precision(self.config.precision):
            encoder = build_encoder(encoder_config, self.rng.split("init"))
            head = build_head(
                encoder_config.embed_dim,
                dataset.class_count,
                rng=self.rng.split("head"),
                init="normal",
            )
            self.classifier = Classifier(encoder, head)
            self.streams.update({self.rng.label + "/init", self.rng.label + "/head"})
            self.fit(dataset, self.classifier.parameters())

        return self.classifier

    def batch_loss(self, indices: np.ndarray, batch_idx: int) -> Tensor:
        batch = self.clean_batch(self.clean_images(indices, batch_idx))

        return loss_cross_entropy(self.classifier.logits(batch), self.dataset.labels[indices])


class StudentTrainer(TrainerBase):
    r"""Contrastive training of a student on corrupted images.

    Per batch, the clean images are augmented once. The frozen teacher embeds
    the normalized clean copy, and the student embeds the corrupted-then-normalized copy.
    Labels are dropped before training.
    """

    role = "student"

    @property
    def min_batch_size(self) -> int:
        return 2 if self.config.loss.family == "contrastive" else 1

    def __call__(
        self, teacher: EncoderModel, dataset: Dataset, student: Optional[EncoderModel] = None
    ) -> EncoderModel:
        if not teacher.frozen:
            raise ContractError("The teacher should be frozen.")

        if student is None:
            student = student_from_teacher(teacher)

        with precision(self.config.precision):
            self.teacher = teacher.copy(frozen=True, dtype=get_dtype())
            self.student = student.copy(frozen=False, dtype=get_dtype())
            self.fit(dataset.without_labels(), self.student.parameters())

        return self.student

    def batch_loss(self, indices: np.ndarray, batch_idx: int) -> Tensor:
        if self.dataset.labels is not None:
            raise ContractError("Student training reads no labels.")

        images = self.clean_images(indices, batch_idx)
        clean = self.clean_batch(images)
        distorted = self.corrupted_batch(images, batch_idx)

        if clean.corrupted or not distorted.corrupted:
            raise ContractError("The teacher sees clean images and the student corrupted ones.")

        R_emb = embed(self.teacher, clean)
        S_emb = embed(self.student, distorted)

        return training_loss(S_emb, R_emb, self.config.loss)


class ProbeTrainer(TrainerBase):
    r"""Linear probe on top of a frozen encoder.

    The probe sees embeddings of corrupted-then-normalized images and keeps
    ``round(label_fraction * n_c)`` labeled images of every class ``c``.
    Weight decay of ``config`` is not applied to the probe.
    """

    role = "probe"
    weight_decay_applies = False

    def __call__(self, encoder: EncoderModel, dataset: Dataset) -> LinearHead:
        if not encoder.frozen:
            raise ContractError("The probed encoder should be frozen.")

        if not dataset.labeled:
            raise DataError("Probe training needs labels.")

        if self.config.weight_decay != 0:
            logger.warning(
                "probe: weight_decay=%g is ignored, the probe is trained without it.",
                self.config.weight_decay,
            )

        self.streams.add(self.rng.label + "/labels")
        subset = stratified_subset(dataset, self.config.label_fraction, self.rng.split("labels"))

        if len(subset) < self.config.batch_size:
            raise DataError(
                "{} labeled images are too few for a batch of {}.".format(
                    len(subset), self.config.batch_size
                )
            )

        with precision(self.config.precision):
            self.encoder = encoder.copy(frozen=True, dtype=get_dtype())
            self.head = build_head(encoder.config.embed_dim, dataset.class_count, init="zeros")
            self.fit(subset, self.head.parameters())

        return self.head

    def batch_loss(self, indices: np.ndarray, batch_idx: int) -> Tensor:
        batch = self.corrupted_batch(self.clean_images(indices, batch_idx), batch_idx)
        logits = self.head(embed(self.encoder, batch))

        return loss_cross_entropy(logits, self.dataset.labels[indices])


class BaselineTrainer(TrainerBase):
    r"""End-to-end supervised fine-tuning on corrupted images."""

    role = "baseline"

    def __call__(self, init: Classifier, dataset: Dataset) -> Classifier:
        if not dataset.labeled:
            raise DataError("Baseline training needs labels.")

        with precision(self.config.precision):
            encoder = init.encoder.copy(frozen=False, dtype=get_dtype())
            head = LinearHead.from_state_dict(init.head.state_dict(), requires_grad=True)
            self.classifier = Classifier(encoder, head)
            self.fit(dataset, self.classifier.parameters())

        return self.classifier

    def batch_loss(self, indices: np.ndarray, batch_idx: int) -> Tensor:
        batch = self.corrupted_batch(self.clean_images(indices, batch_idx), batch_idx)

        return loss_cross_entropy(self.classifier.logits(batch), self.dataset.labels[indices])


def train_teacher(
    dataset: Dataset, config: TrainConfig, encoder_config: EncoderConfig, **kwargs
) -> Classifier:
    r"""Pretrain a teacher with cross entropy on clean images.

    Args:
        dataset (Dataset):
            Labeled clean dataset with at least 2 classes.
        config (TrainConfig):
            Hyperparameters. ``config.operator`` should be the identity.
        encoder_config (EncoderConfig):
            Architecture of the encoder.
        kwargs:
            Keyword arguments of :class:`TeacherTrainer`.

    Returns:
        Classifier. Use :func:`rinv.encoders.teacher_from_supervised` to get the frozen teacher.
    """
    return TeacherTrainer(config, **kwargs)(dataset, encoder_config)


def train_student_contrastive(
    teacher: EncoderModel,
    dataset: Dataset,
    config: TrainConfig,
    student: Optional[EncoderModel] = None,
    **kwargs
) -> EncoderModel:
    r"""Train a student to map corrupted images to the teacher's clean embeddings.

    Args:
        teacher (EncoderModel):
            Frozen teacher.
        dataset (Dataset):
            Clean images. Labels, if any, are dropped.
        config (TrainConfig):
            Hyperparameters with the loss and the forward operator.
        student (EncoderModel, optional):
            Initial student. A trainable copy of the teacher by default.

    Returns:
        Trained student.

    Examples:

        .. code-block:: python

            >>> from rinv.corruptions import ForwardOperator
            >>> from rinv.training import TrainConfig, train_student_contrastive
            >>> config = TrainConfig(epochs=25, batch_size=256, operator=ForwardOperator.mask(0.9))
            >>> student = train_student_contrastive(teacher, dataset, config)
    """
    return StudentTrainer(config, **kwargs)(teacher, dataset, student=student)


def train_probe(
    encoder: EncoderModel, dataset: Dataset, config: TrainConfig, **kwargs
) -> LinearHead:
    r"""Train a linear probe on a frozen encoder with corrupted inputs."""
    return ProbeTrainer(config, **kwargs)(encoder, dataset)


def train_baseline_e2e(
    init: Classifier, dataset: Dataset, config: TrainConfig, **kwargs
) -> Classifier:
    r"""Fine-tune an encoder and its head end to end on corrupted inputs."""
    return BaselineTrainer(config, **kwargs)(init, dataset)
