import numpy as np
import pytest
from dummy.models import tiny_head

from rinv.encoders import LinearHead, build_head, head_logits
from rinv.errors import DomainError
from rinv.numerics import RngStream, Tensor

parameters_init = ["zeros", "normal"]


@pytest.mark.parametrize("init", parameters_init)
def test_build_head(init: str):
    head = build_head(4, 3, rng=RngStream(0, "head"), init=init)

    assert head.embed_dim == 4
    assert head.n_classes == 3
    assert all(param.requires_grad for param in head.parameters())

    if init == "zeros":
        assert np.all(head.weight.data == 0)


def test_head_logits():
    head = tiny_head()
    embeddings = np.random.default_rng(0).standard_normal((5, 4))

    logits = head_logits(head, Tensor(embeddings))

    assert np.allclose(logits.data, embeddings @ head.weight.data + head.bias.data)


def test_head_state_dict():
    head = tiny_head()

    restored = LinearHead.from_state_dict(head.state_dict(), requires_grad=False)

    assert np.array_equal(restored.weight.data, head.weight.data)
    assert not restored.weight.requires_grad


def test_build_head_invalid():
    with pytest.raises(DomainError):
        build_head(0, 3)

    with pytest.raises(ValueError):
        build_head(4, 3, init="normal")

    with pytest.raises(NotImplementedError):
        build_head(4, 3, init="orthogonal")
