import warnings

import numpy as np
import pytest

from rinv.numerics import RngStream
from rinv.theory import (
    EmbeddingSet,
    antipodal_pair,
    project_tangent,
    random_unit_vectors,
    recover_all,
    recover_embedding,
    regular_simplex,
)

parameters_n = [2, 3, 4]
parameters_tau = [0.05, 0.5]


@pytest.mark.parametrize("n", parameters_n)
@pytest.mark.parametrize("tau", parameters_tau)
def test_recover_all_simplex(n: int, tau: float):
    embedding_set = EmbeddingSet(regular_simplex(n, dim=3), tau=tau)

    result = recover_all(embedding_set, RngStream(0, "recovery"))

    assert result.converged
    assert np.all(result.cosine_to_target > 1 - 1e-6)
    assert np.all(result.objective_gap > -1e-12)
    assert result.recovered.shape == (n, 3)


def test_recover_embedding_start():
    embedding_set = EmbeddingSet(antipodal_pair(2), tau=0.1)

    # starting on the other target still descends to the own one
    row = recover_embedding(0, embedding_set, start=np.array([-1.0, 1e-3]))

    assert row.cosine_to_target > 1 - 1e-6


def test_recover_embedding_unbalanced():
    embedding_set = EmbeddingSet(np.eye(2), tau=0.1)

    with pytest.warns(UserWarning):
        recover_embedding(0, embedding_set, rng=RngStream(0, "x"))


def test_recover_embedding_single_row():
    embedding_set = EmbeddingSet(np.array([[0.0, 1.0]]), tau=0.1)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        row = recover_embedding(0, embedding_set, rng=RngStream(0, "x"))

    assert row.converged
    assert row.iterations == 0


def test_random_unit_vectors():
    X = random_unit_vectors(RngStream(0, "x"), 100, 4)

    assert np.allclose(np.linalg.norm(X, axis=1), 1)

    g = np.random.default_rng(0).standard_normal((100, 4))

    assert np.allclose(np.sum(project_tangent(X, g) * X, axis=1), 0)
