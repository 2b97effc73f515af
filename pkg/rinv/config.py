import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .corruptions import ForwardOperator
from .encoders import EncoderConfig
from .errors import ConfigError
from .evaluation.presets import LABEL_FRACTIONS, MASK_SWEEP, N_INSTANTIATIONS
from .io.reports import write_json
from .losses import LossSpec
from .training import TrainConfig

__all__ = [
    "SynthConfig",
    "DataConfig",
    "EvalConfig",
    "ExperimentConfig",
    "load_config",
    "save_config",
]

sweep_kinds = ["severity", "label_efficiency", "label_shift", "transfer", "clean_probe"]
normalizations = ["fixed", "dataset"]


def _check_keys(cls, config: Dict[str, Any]) -> None:
    unknown = set(config) - {f.name for f in dataclasses.fields(cls)}

    if len(unknown) > 0:
        raise ConfigError("Unknown keys {} in {}.".format(sorted(unknown), cls.__name__))


@dataclass(frozen=True)
class SynthConfig:
    r"""Class-conditional synthetic images in place of files."""

    n_classes: int = 10
    per_class: int = 500
    test_per_class: int = 100
    channels: int = 3
    height: int = 32
    width: int = 32
    noise_std: float = 0.05

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "SynthConfig":
        _check_keys(cls, config)

        return cls(**config)


@dataclass(frozen=True)
class DataConfig:
    r"""Source of the training and test splits.

    Attributes:
        train_images, train_labels, test_images, test_labels (str, optional):
            Paths to IDX files.
        synth (SynthConfig, optional):
            Synthetic data, used when no training images are given.
        normalization (str):
            ``"fixed"`` (mean and std 0.5) or ``"dataset"`` (channel statistics of the
            clean training images).
    """

    train_images: Optional[str] = None
    train_labels: Optional[str] = None
    test_images: Optional[str] = None
    test_labels: Optional[str] = None
    synth: Optional[SynthConfig] = None
    normalization: str = "fixed"

    def __post_init__(self) -> None:
        if self.train_images is None and self.synth is None:
            raise ConfigError("Either IDX paths or a synth block is required.")

        if self.normalization not in normalizations:
            raise ConfigError(
                "normalization should be one of {}, but given {}.".format(
                    normalizations, self.normalization
                )
            )

    def to_dict(self) -> Dict[str, Any]:
        config = dataclasses.asdict(self)

        if self.synth is not None:
            config["synth"] = self.synth.to_dict()

        return config

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "DataConfig":
        _check_keys(cls, config)
        config = dict(config)

        if config.get("synth") is not None:
            config["synth"] = SynthConfig.from_dict(config["synth"])

        return cls(**config)


@dataclass(frozen=True)
class EvalConfig:
    r"""Evaluation protocol.

    Attributes:
        n_instantiations (int):
            Corruption instantiations per report. Default: ``10``.
        metrics (list of str):
            Metrics of :func:`rinv.evaluation.evaluate`. Default: ``["top1"]``.
        sweep (str):
            ``"severity"``, ``"label_efficiency"``, ``"label_shift"``, ``"transfer"``,
            or ``"clean_probe"``.
        severities (list of float):
            Fixed severities of severity sweeps.
        fractions (list of float):
            Label fractions of label-efficiency sweeps.
        batch_size (int):
            Images per evaluation batch. Default: ``256``.
        plot (bool):
            Also write an SVG chart of sweeps. Default: ``False``.
    """

    n_instantiations: int = N_INSTANTIATIONS
    metrics: List[str] = field(default_factory=lambda: ["top1"])
    sweep: str = "severity"
    severities: List[float] = field(default_factory=lambda: list(MASK_SWEEP))
    fractions: List[float] = field(default_factory=lambda: list(LABEL_FRACTIONS))
    batch_size: int = 256
    plot: bool = False

    def __post_init__(self) -> None:
        if self.sweep not in sweep_kinds:
            raise ConfigError(
                "sweep should be one of {}, but given {}.".format(sweep_kinds, self.sweep)
            )

        if self.n_instantiations < 1:
            raise ConfigError(
                "n_instantiations should be positive, but given {}.".format(self.n_instantiations)
            )

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "EvalConfig":
        _check_keys(cls, config)

        return cls(**config)


def _default_teacher() -> TrainConfig:
    return TrainConfig(epochs=10, batch_size=64, lr_max=1e-3, weight_decay=1e-4)


def _default_student() -> TrainConfig:
    return TrainConfig(
        epochs=25,
        batch_size=256,
        lr_max=3e-4,
        weight_decay=1e-4,
        loss=LossSpec("contrastive", "student_vs_teacher", 0.1),
        operator=ForwardOperator.mask(0.9),
    )


def _default_probe() -> TrainConfig:
    return TrainConfig(
        epochs=10,
        batch_size=64,
        lr_max=1e-3,
        weight_decay=0.0,
        operator=ForwardOperator.mask(0.9),
        augment=False,
    )


def _default_baseline() -> TrainConfig:
    return TrainConfig(
        epochs=25, batch_size=64, lr_max=1e-3, weight_decay=1e-4, operator=ForwardOperator.mask(0.9)
    )


def _default_checkpoints() -> Dict[str, str]:
    return {
        "teacher": "teacher.rinv",
        "student": "student.rinv",
        "probe": "probe.rinv",
        "baseline": "baseline.rinv",
    }


@dataclass(frozen=True)
class ExperimentConfig:
    r"""Configuration of every pipeline of an experiment.

    Checkpoint paths are relative to ``out_dir`` unless absolute.

    Examples:

        .. code-block:: python

            >>> from rinv.config import ExperimentConfig
            >>> config = ExperimentConfig()
            >>> ExperimentConfig.from_dict(config.to_dict()) == config
            True
    """

    data: DataConfig = field(default_factory=lambda: DataConfig(synth=SynthConfig()))
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    teacher: TrainConfig = field(default_factory=_default_teacher)
    student: TrainConfig = field(default_factory=_default_student)
    probe: TrainConfig = field(default_factory=_default_probe)
    baseline: TrainConfig = field(default_factory=_default_baseline)
    eval: EvalConfig = field(default_factory=EvalConfig)
    checkpoints: Dict[str, str] = field(default_factory=_default_checkpoints)
    seed: int = 0
    out_dir: str = "runs"

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        r"""Copy whose pipelines all use ``seed``."""
        return self.replace(
            seed=seed,
            teacher=self.teacher.replace(seed=seed),
            student=self.student.replace(seed=seed),
            probe=self.probe.replace(seed=seed),
            baseline=self.baseline.replace(seed=seed),
        )

    def with_precision(self, precision: str) -> "ExperimentConfig":
        return self.replace(
            teacher=self.teacher.replace(precision=precision),
            student=self.student.replace(precision=precision),
            probe=self.probe.replace(precision=precision),
            baseline=self.baseline.replace(precision=precision),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data": self.data.to_dict(),
            "encoder": self.encoder.to_dict(),
            "teacher": self.teacher.to_dict(),
            "student": self.student.to_dict(),
            "probe": self.probe.to_dict(),
            "baseline": self.baseline.to_dict(),
            "eval": self.eval.to_dict(),
            "checkpoints": dict(self.checkpoints),
            "seed": self.seed,
            "out_dir": self.out_dir,
        }

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "ExperimentConfig":
        _check_keys(cls, config)
        parsers = {
            "data": DataConfig.from_dict,
            "encoder": EncoderConfig.from_dict,
            "teacher": TrainConfig.from_dict,
            "student": TrainConfig.from_dict,
            "probe": TrainConfig.from_dict,
            "baseline": TrainConfig.from_dict,
            "eval": EvalConfig.from_dict,
        }
        kwargs = {}

        for name, value in config.items():
            kwargs[name] = parsers[name](value) if name in parsers else value

        if "checkpoints" in kwargs:
            kwargs["checkpoints"] = {**_default_checkpoints(), **kwargs["checkpoints"]}

        return cls(**kwargs)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path) as f:
            config = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("{} is not valid JSON: {}".format(path, e)) from e

    if not isinstance(config, dict):
        raise ConfigError("{} should hold a JSON object.".format(path))

    return ExperimentConfig.from_dict(config)


def save_config(path: str, config: ExperimentConfig) -> None:
    write_json(path, config.to_dict())
