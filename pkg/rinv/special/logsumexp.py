from typing import Optional, Tuple, Union

import numpy as np


def logsumexp(
    X: np.ndarray,
    axis: Optional[Union[int, Tuple[int, ...]]] = None,
    keepdims: bool = False,
    where: Optional[np.ndarray] = None,
) -> np.ndarray:
    r"""Compute log-sum-exp values with the max-shift trick.

    .. math::
        \log\sum_{j}\exp(x_{j})
        = m + \log\sum_{j}\exp(x_{j} - m),
        \quad m = \max_{j}x_{j}

    Args:
        X (np.ndarray):
            Elements to compute log-sum-exp.
        axis (int or tuple[int], optional):
            Axis or axes over which the sum is performed.
            Default: ``None``.
        keepdims (bool):
            If ``True`` is given, reduced dimension(s) are kept with size one.
            Default: ``False``.
        where (np.ndarray, optional):
            Boolean mask broadcastable to ``X``. Only elements where ``where`` is ``True``
            enter the sum. Every reduced slice must contain at least one selected element.

    Returns:
        np.ndarray of log-sum-exp values.

    Examples:

        .. code-block:: python

            >>> import numpy as np

            >>> X = np.array([[1000.0, 1000.0], [0.0, 0.0]])
            >>> logsumexp(X, axis=1)
            array([1000.69314718,    0.69314718])
            >>> logsumexp(X, axis=1, where=~np.eye(2, dtype=bool))
            array([1000.,    0.])
    """
    if where is None:
        vmax = np.max(X, axis=axis, keepdims=True)
        exp = np.exp(X - vmax)
    else:
        where = np.broadcast_to(where, X.shape)
        vmax = np.max(X, axis=axis, keepdims=True, where=where, initial=-np.inf)
        exp = np.where(where, np.exp(np.where(where, X - vmax, 0)), 0)

    sum_exp = exp.sum(axis=axis, keepdims=True)
    v = np.log(sum_exp) + vmax

    if not keepdims:
        if axis is None:
            v = np.squeeze(v)
        else:
            v = np.squeeze(v, axis=axis)

    return v
