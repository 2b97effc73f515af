import pytest

from rinv.errors import ConfigError, DomainError
from rinv.losses import LossSpec

parameters_spec = [
    {},
    {"family": "mse"},
    {"variant": "nt_xent", "tau": 0.5},
]


@pytest.mark.parametrize("spec", parameters_spec)
def test_loss_spec_dict(spec):
    loss_spec = LossSpec.from_dict(spec)

    assert LossSpec.from_dict(loss_spec.to_dict()) == loss_spec


def test_loss_spec_invalid():
    with pytest.raises(ConfigError):
        LossSpec(family="triplet")

    with pytest.raises(ConfigError):
        LossSpec(variant="teacher_vs_teacher")

    with pytest.raises(DomainError):
        LossSpec(tau=0.0)

    with pytest.raises(ConfigError):
        LossSpec.from_dict({"temperature": 0.1})
