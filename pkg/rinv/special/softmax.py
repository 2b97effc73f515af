from typing import Optional

import numpy as np


def softmax(
    X: np.ndarray, axis: Optional[int] = None, where: Optional[np.ndarray] = None
) -> np.ndarray:
    r"""Compute softmax values.

    Used to evaluate the weights :math:`w_{i}(j)` of the uniformity term,

    .. math::
        w_{i}(j) = \frac{\exp(K(i,j)/\tau)}{\sum_{j'}\exp(K(i,j')/\tau)}.

    Args:
        X (np.ndarray):
            Elements to compute softmax.
        axis (int, optional):
            Axis over which the sum is performed.
            Default: ``None``.
        where (np.ndarray, optional):
            Boolean mask broadcastable to ``X``. Masked-out elements get weight ``0``.

    Returns:
        np.ndarray of softmax values.

    Examples:

        .. code-block:: python

            >>> import numpy as np

            >>> X = np.array([[1, 2, 3], [4, 5, 6]])
            >>> softmax(X, axis=1)
            array([[0.09003057, 0.24472847, 0.66524096],
                [0.09003057, 0.24472847, 0.66524096]])
    """
    if where is None:
        vmax = np.max(X, axis=axis, keepdims=True)
        exp = np.exp(X - vmax)
    else:
        where = np.broadcast_to(where, X.shape)
        vmax = np.max(X, axis=axis, keepdims=True, where=where, initial=-np.inf)
        exp = np.where(where, np.exp(np.where(where, X - vmax, 0)), 0)

    v = exp / np.sum(exp, axis=axis, keepdims=True)

    return v
