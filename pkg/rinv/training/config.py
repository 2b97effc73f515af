import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..corruptions import ForwardOperator
from ..errors import ConfigError
from ..losses import LossSpec

__all__ = ["TrainConfig", "RunRecord", "desk_batch_size"]

precisions = ["f32", "f64"]
weight_decay_modes = ["decoupled", "coupled"]


def desk_batch_size(n_examples: int, cap: int = 256) -> int:
    r"""Batch size ``min(cap, n_examples // 10)``, at least 2."""
    return max(2, min(cap, n_examples // 10))


@dataclass(frozen=True)
class TrainConfig:
    r"""Hyperparameters of one training pipeline.

    Attributes:
        epochs (int):
            Number of passes over the dataset. Default: ``25``.
        batch_size (int):
            Number of images per batch. Default: ``256``.
        lr_max (float):
            Peak learning rate of the cosine schedule. Default: ``3e-4``.
        weight_decay (float):
            Weight decay of Adam. Default: ``1e-4``.
        weight_decay_mode (str):
            ``"decoupled"`` or ``"coupled"``. Default: ``"decoupled"``.
        loss (LossSpec):
            Objective of student training. Ignored by supervised pipelines.
        operator (ForwardOperator):
            Corruption applied to the inputs of the trained model.
        seed (int):
            Seed of every random stream of the run. Default: ``0``.
        label_fraction (float):
            Fraction of labels kept per class by the probe. Default: ``1.0``.
        precision (str):
            ``"f32"`` or ``"f64"``. Default: ``"f32"``.
        augment (bool):
            Random crop and horizontal flip of clean images. Default: ``True``.
        crop_padding (int):
            Zero padding before random cropping. Default: ``4``.
    """

    epochs: int = 25
    batch_size: int = 256
    lr_max: float = 3e-4
    weight_decay: float = 1e-4
    weight_decay_mode: str = "decoupled"
    loss: LossSpec = field(default_factory=LossSpec)
    operator: ForwardOperator = field(default_factory=ForwardOperator.identity)
    seed: int = 0
    label_fraction: float = 1.0
    precision: str = "f32"
    augment: bool = True
    crop_padding: int = 4

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigError("epochs should be positive, but given {}.".format(self.epochs))

        if self.batch_size < 1:
            raise ConfigError(
                "batch_size should be positive, but given {}.".format(self.batch_size)
            )

        if self.loss.family == "contrastive" and self.batch_size < 2:
            raise ConfigError(
                "Contrastive training needs batch_size >= 2, but given {}.".format(self.batch_size)
            )

        if self.lr_max < 0 or self.weight_decay < 0:
            raise ConfigError(
                "lr_max and weight_decay should be nonnegative, but given {} and {}.".format(
                    self.lr_max, self.weight_decay
                )
            )

        if self.weight_decay_mode not in weight_decay_modes:
            raise ConfigError(
                "weight_decay_mode should be one of {}, but given {}.".format(
                    weight_decay_modes, self.weight_decay_mode
                )
            )

        if not 0 < self.label_fraction <= 1:
            raise ConfigError(
                "label_fraction should be in (0, 1], but given {}.".format(self.label_fraction)
            )

        if self.precision not in precisions:
            raise ConfigError(
                "precision should be one of {}, but given {}.".format(precisions, self.precision)
            )

        if self.crop_padding < 0:
            raise ConfigError(
                "crop_padding should be nonnegative, but given {}.".format(self.crop_padding)
            )

    @property
    def tau(self) -> float:
        return self.loss.tau

    def replace(self, **changes) -> "TrainConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        config = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        config["loss"] = self.loss.to_dict()
        config["operator"] = self.operator.to_dict()

        return config

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "TrainConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(config) - names

        if len(unknown) > 0:
            raise ConfigError("Unknown keys {} in train config.".format(sorted(unknown)))

        config = dict(config)

        if "loss" in config:
            config["loss"] = LossSpec.from_dict(config["loss"])

        if "operator" in config:
            config["operator"] = ForwardOperator.from_dict(config["operator"])

        return cls(**config)


@dataclass
class RunRecord:
    r"""Everything needed to re-execute a training run.

    Attributes:
        role (str):
            ``"teacher"``, ``"student"``, ``"probe"``, or ``"baseline"``.
        config (dict):
            Snapshot of the :class:`TrainConfig`.
        epoch_losses (list of float):
            Mean batch loss of every epoch.
        lr_history (list of float):
            Learning rate of every optimizer step.
        n_examples (int):
            Number of training examples (after label subsampling).
        streams (list of str):
            Labels of the random streams drawn from, all seeded by ``config["seed"]``.
        wall_clock (float):
            Seconds spent training.
        checkpoint (str, optional):
            Path of the final checkpoint.
        extra (dict):
            Role-specific entries, e.g. the encoder architecture.
    """

    role: str
    config: Dict[str, Any]
    epoch_losses: List[float] = field(default_factory=list)
    lr_history: List[float] = field(default_factory=list)
    n_examples: int = 0
    streams: List[str] = field(default_factory=list)
    wall_clock: float = 0.0
    checkpoint: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return self.config["seed"]

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, record: Dict[str, Any]) -> "RunRecord":
        return cls(**record)
