import numpy as np

from ..errors import DegenerateEmbeddingError

NORM_FLOOR = 1e-12


def row_norms(input: np.ndarray, eps: float = NORM_FLOOR) -> np.ndarray:
    r"""Euclidean norms of the rows of a 2D array, guarded by a norm floor.

    Args:
        input (np.ndarray):
            Array with shape of (n_rows, n_features).
        eps (float):
            Norm floor. Default: ``1e-12``.

    Returns:
        np.ndarray of row norms with shape of (n_rows, 1).

    Raises:
        DegenerateEmbeddingError: If a row norm is not greater than ``eps``.
    """
    norm = np.sqrt(np.sum(input**2, axis=-1, keepdims=True))

    if np.any(norm <= eps):
        (rows,) = np.nonzero(norm[..., 0] <= eps)
        raise DegenerateEmbeddingError(
            "Row norm is not greater than {} at rows {}.".format(eps, rows.tolist())
        )

    return norm


def unit_rows(input: np.ndarray, eps: float = NORM_FLOOR) -> np.ndarray:
    r"""Project rows of a 2D array onto the unit sphere."""
    return input / row_norms(input, eps=eps)
