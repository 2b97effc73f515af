import json

import pytest

from rinv.corruptions import Fixed, ForwardOperator, Range, sample_operator_instance
from rinv.errors import ConfigError, DomainError
from rinv.numerics import RngStream

parameters_op = [
    ForwardOperator.identity(),
    ForwardOperator.mask(0.9),
    ForwardOperator.mask(0.5, exact=True),
    ForwardOperator.mask((0.5, 0.95)),
    ForwardOperator.noise(0.4),
    ForwardOperator.blur(5, (0.5, 2.0)),
    ForwardOperator.compose(ForwardOperator.blur(3, 1.0), ForwardOperator.noise((0.0, 0.1))),
]


@pytest.mark.parametrize("op", parameters_op)
def test_operator_json(op: ForwardOperator):
    spec = json.loads(json.dumps(op.to_dict()))

    assert ForwardOperator.from_dict(spec) == op


def test_operator_describe():
    assert ForwardOperator.mask(0.9).describe() == "mask(p=0.9)"
    assert ForwardOperator.noise((0.1, 0.5)).describe() == "noise(sigma=[0.1,0.5])"
    assert ForwardOperator.blur(5, 1.0).describe() == "blur(n=5,std=1)"
    assert (
        ForwardOperator.compose(ForwardOperator.identity(), ForwardOperator.mask(0.5)).describe()
        == "compose(identity,mask(p=0.5))"
    )


def test_operator_flags():
    assert ForwardOperator.blur(3, 1.0).is_deterministic
    assert not ForwardOperator.blur(3, (0.5, 1.0)).is_deterministic
    assert not ForwardOperator.identity().is_deterministic
    assert ForwardOperator.mask(0.9).is_random
    assert ForwardOperator.mask((0.1, 0.2)).is_ranged


def test_with_severity():
    op = ForwardOperator.mask((0.5, 0.95))

    assert op.with_severity(0.97).severity == 0.97
    assert ForwardOperator.blur(3, 1.0).with_severity((5, 2.0)) == ForwardOperator.blur(5, 2.0)

    with pytest.raises(ConfigError):
        ForwardOperator.identity().with_severity(0.5)


def test_sample_operator_instance():
    op = ForwardOperator.compose(ForwardOperator.mask((0.5, 0.95)), ForwardOperator.noise(0.1))

    instance = sample_operator_instance(op, RngStream(0, "instance"))

    assert not instance.is_ranged
    assert isinstance(instance.ops[0].p, Fixed)
    assert 0.5 <= instance.ops[0].p.value <= 0.95
    assert instance.ops[1] == op.ops[1]


def test_invalid_operator():
    with pytest.raises(DomainError):
        ForwardOperator.mask(1.5)

    with pytest.raises(DomainError):
        ForwardOperator.noise(-0.1)

    with pytest.raises(DomainError):
        ForwardOperator.blur(4, 1.0)

    with pytest.raises(DomainError):
        Range(0.9, 0.1)

    with pytest.raises(ConfigError):
        ForwardOperator.from_dict({"kind": "jpeg"})
