import numpy as np
import pytest
import scipy.special

from rinv.errors import DomainError
from rinv.losses import similarity_matrix, uniformity_weights
from rinv.numerics import Tensor, precision
from rinv.special import unit_rows

parameters_tau = [0.01, 0.1, 1.0]


@pytest.mark.parametrize("tau", parameters_tau)
def test_uniformity_weights(tau: float):
    rng = np.random.default_rng(0)
    S = unit_rows(rng.standard_normal((5, 3)))
    R = unit_rows(rng.standard_normal((5, 3)))

    with precision("f64"):
        K = similarity_matrix(Tensor(S), Tensor(R), tau=tau)

    w = uniformity_weights(K).w

    assert np.allclose(K.K.data, S @ R.T)
    assert np.all(w >= 0)
    assert np.allclose(w.sum(axis=1), 1)
    assert np.allclose(w, scipy.special.softmax(S @ R.T / tau, axis=1))


def test_similarity_matrix_invalid_tau():
    E = Tensor(np.eye(2))

    with pytest.raises(DomainError):
        similarity_matrix(E, E, tau=0.0)
