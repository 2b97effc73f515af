import numpy as np

from rinv.numerics import Tensor, numerical_gradient, precision, relative_error


def test_numerical_gradient():
    with precision("f64"):
        x = Tensor(np.array([1.0, 2.0, -0.5]), requires_grad=True)

        grad = numerical_gradient(lambda: (x * x * x).sum(), x, h=1e-5)

    assert np.allclose(grad, 3 * x.data**2, atol=1e-8)
    # inputs are restored
    assert np.array_equal(x.data, [1.0, 2.0, -0.5])


def test_relative_error():
    assert relative_error(np.zeros(3), np.zeros(3)) == 0
    assert np.isclose(relative_error(np.array([1.0, 0.0]), np.array([0.0, 0.0])), 1)
