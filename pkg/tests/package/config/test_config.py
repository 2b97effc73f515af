import json
import os
import tempfile

import pytest

from rinv.config import (
    DataConfig,
    EvalConfig,
    ExperimentConfig,
    SynthConfig,
    load_config,
    save_config,
)
from rinv.corruptions import ForwardOperator
from rinv.errors import ConfigError

parameters_seed = [0, 7]
parameters_precision = ["f32", "f64"]


def test_experiment_config():
    config = ExperimentConfig()

    assert ExperimentConfig.from_dict(config.to_dict()) == config
    assert config.student.loss.variant == "student_vs_teacher"
    assert config.student.operator == ForwardOperator.mask(0.9)
    assert not config.probe.augment
    assert config.eval.severities == [0.96, 0.97, 0.98, 0.99]


@pytest.mark.parametrize("seed", parameters_seed)
@pytest.mark.parametrize("precision", parameters_precision)
def test_with_seed_precision(seed: int, precision: str):
    config = ExperimentConfig().with_seed(seed).with_precision(precision)

    pipelines = [config.teacher, config.student, config.probe, config.baseline]

    assert config.seed == seed
    assert all(pipeline.seed == seed for pipeline in pipelines)
    assert all(pipeline.precision == precision for pipeline in pipelines)


def test_from_dict_partial():
    config = ExperimentConfig.from_dict(
        {
            "data": {"synth": {"n_classes": 3, "per_class": 4}},
            "student": {"epochs": 1, "operator": {"kind": "noise", "sigma": [0.0, 0.3]}},
            "eval": {"sweep": "label_efficiency", "fractions": [0.5, 1.0]},
            "checkpoints": {"student": "robust.rinv"},
            "seed": 3,
        }
    )

    assert config.data.synth == SynthConfig(n_classes=3, per_class=4)
    assert config.student.epochs == 1
    assert config.student.operator.describe() == "noise(sigma=[0,0.3])"
    assert config.eval.fractions == [0.5, 1.0]
    assert config.checkpoints["student"] == "robust.rinv"
    assert config.checkpoints["teacher"] == "teacher.rinv"
    assert config.seed == 3


def test_config_invalid():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"lr": 1e-3})

    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"data": {"synth": {"classes": 3}}})

    with pytest.raises(ConfigError):
        DataConfig()

    with pytest.raises(ConfigError):
        DataConfig(synth=SynthConfig(), normalization="minmax")

    with pytest.raises(ConfigError):
        EvalConfig(sweep="robustness")

    with pytest.raises(ConfigError):
        EvalConfig(n_instantiations=0)


def test_load_save_config():
    config = ExperimentConfig(seed=5, out_dir="out")

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "config.json")
        save_config(path, config)
        loaded = load_config(path)

        with open(path, mode="w") as f:
            f.write("{")

        with pytest.raises(ConfigError):
            load_config(path)

        with open(path, mode="w") as f:
            json.dump([1, 2], f)

        with pytest.raises(ConfigError):
            load_config(path)

    assert loaded == config
