from typing import Optional

import numpy as np
import pytest
import scipy.special

from rinv.special import logsumexp

parameters_axis = [0, 1, (0, 2), None]
parameters_keepdims = [True, False]


@pytest.mark.parametrize("axis", parameters_axis)
@pytest.mark.parametrize("keepdims", parameters_keepdims)
def test_logsumexp(axis: Optional[int], keepdims: bool):
    rng = np.random.default_rng(0)

    batch_size, n_channels = 4, 3
    shape = (batch_size, 8, n_channels)

    X = 30 * rng.standard_normal(shape)

    Y = logsumexp(X, axis=axis, keepdims=keepdims)
    Y_scipy = scipy.special.logsumexp(X, axis=axis, keepdims=keepdims)

    assert np.allclose(Y, Y_scipy)


def test_logsumexp_where():
    rng = np.random.default_rng(0)

    n_samples = 5
    X = 10 * rng.standard_normal((n_samples, n_samples))
    where = ~np.eye(n_samples, dtype=bool)

    Y = logsumexp(X, axis=1, where=where)
    Y_scipy = scipy.special.logsumexp(np.where(where, X, -np.inf), axis=1)

    assert np.allclose(Y, Y_scipy)


def test_logsumexp_large_values():
    X = np.array([[1000.0, 1000.0], [-1000.0, -1000.0]])

    Y = logsumexp(X, axis=1)

    assert np.all(np.isfinite(Y))
    assert np.allclose(Y, [1000 + np.log(2), -1000 + np.log(2)])
