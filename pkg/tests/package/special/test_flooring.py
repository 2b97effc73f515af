import numpy as np
import pytest

from rinv.errors import DegenerateEmbeddingError
from rinv.special import NORM_FLOOR, row_norms, unit_rows

parameters_n_features = [1, 3, 16]


@pytest.mark.parametrize("n_features", parameters_n_features)
def test_unit_rows(n_features: int):
    rng = np.random.default_rng(0)

    X = rng.standard_normal((5, n_features))
    Y = unit_rows(X)

    assert np.allclose(np.linalg.norm(Y, axis=1), 1)
    assert np.allclose(row_norms(X)[:, 0], np.linalg.norm(X, axis=1))


def test_unit_rows_degenerate():
    X = np.ones((3, 2))
    X[1] = NORM_FLOOR / 10

    with pytest.raises(DegenerateEmbeddingError) as e:
        unit_rows(X)

    assert "[1]" in str(e.value)
