import numpy as np
import pytest

from rinv.errors import NumericError
from rinv.numerics import Tensor, precision


def test_tensor_backward():
    a = Tensor([1.0, 2.0], requires_grad=True)
    b = Tensor([3.0, 4.0])

    loss = (a * b).sum()
    loss.backward()

    assert np.allclose(a.grad, [3.0, 4.0])
    assert b.grad is None


def test_tensor_accumulation():
    a = Tensor([1.0, -2.0], requires_grad=True)

    for _ in range(2):
        (a * a).sum().backward()

    assert np.allclose(a.grad, 2 * 2 * a.data)

    a.zero_grad()

    assert np.all(a.grad == 0)


def test_tensor_shared_node():
    # a is used twice, so its gradient sums both paths
    a = Tensor(np.array([[1.0, 2.0], [3.0, 4.0]]), requires_grad=True)
    b = a @ a

    b.sum().backward()

    ones = np.ones((2, 2))
    expected = ones @ a.data.T + a.data.T @ ones

    assert np.allclose(a.grad, expected)


def test_tensor_detach():
    a = Tensor([1.0, 2.0], requires_grad=True)
    b = (a * 2).detach()

    assert not b.requires_grad
    assert b.is_leaf


@pytest.mark.parametrize("name", ["f32", "f64"])
def test_tensor_precision(name: str):
    with precision(name):
        a = Tensor([1.0, 2.0])

    assert a.dtype == {"f32": np.float32, "f64": np.float64}[name]


def test_tensor_nonfinite():
    with precision("f64"):
        with pytest.raises(NumericError):
            Tensor([1.0, np.nan])

        a = Tensor([0.0], requires_grad=True)

        with pytest.raises(NumericError):
            (a / 0.0).sum()

    with precision("f32"):
        # finite checks are skipped in training mode
        Tensor([np.inf])
