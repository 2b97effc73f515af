import json

import pytest

from rinv.encoders import EncoderConfig, parameter_shapes
from rinv.errors import ConfigError

parameters_config = [
    {},
    {"architecture": "mlp", "widths": [32, 16], "input_shape": [1, 28, 28]},
    {"embed_dim": 2, "normalize_output": False, "init": "zeros"},
]


@pytest.mark.parametrize("overrides", parameters_config)
def test_encoder_config_json(overrides):
    config = EncoderConfig.from_dict(overrides)

    assert EncoderConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config

    n_parameters = 0

    for shape in parameter_shapes(config).values():
        size = 1

        for n in shape:
            size *= n

        n_parameters += size

    assert n_parameters == config.n_parameters


def test_encoder_config_invalid():
    with pytest.raises(ConfigError):
        EncoderConfig(architecture="resnet")

    with pytest.raises(ConfigError):
        EncoderConfig(embed_dim=1)

    with pytest.raises(ConfigError):
        EncoderConfig(widths=(8, 8))

    with pytest.raises(ConfigError):
        EncoderConfig(input_shape=(3, 31, 32))

    with pytest.raises(ConfigError):
        EncoderConfig.from_dict({"depth": 3})
