import contextlib
from typing import Iterator

import numpy as np

from ..errors import ConfigError, NumericError

__all__ = [
    "set_precision",
    "get_precision",
    "get_dtype",
    "precision",
    "is_verification_mode",
    "check_finite",
]

_dtypes = {"f32": np.float32, "f64": np.float64}
_state = {"precision": "f64"}


def set_precision(name: str) -> None:
    r"""Select the default precision of new tensors.

    Args:
        name (str):
            ``"f64"`` (verification mode, finite checks on every operation)
            or ``"f32"`` (training mode).
    """
    if name not in _dtypes:
        raise ConfigError(
            "precision should be one of {}, but given {}.".format(list(_dtypes), name)
        )

    _state["precision"] = name


def get_precision() -> str:
    return _state["precision"]


def get_dtype() -> np.dtype:
    return _dtypes[_state["precision"]]


def is_verification_mode() -> bool:
    return _state["precision"] == "f64"


@contextlib.contextmanager
def precision(name: str) -> Iterator[None]:
    r"""Context manager version of :func:`set_precision`.

    Examples:

        .. code-block:: python

            >>> from rinv.numerics import precision, get_dtype
            >>> with precision("f32"):
            ...     get_dtype()
            <class 'numpy.float32'>
    """
    previous = get_precision()
    set_precision(name)

    try:
        yield
    finally:
        set_precision(previous)


def check_finite(array: np.ndarray, name: str = "tensor") -> None:
    r"""Raise :class:`NumericError` on NaN/Inf in verification mode."""
    if is_verification_mode() and not np.all(np.isfinite(array)):
        raise NumericError("Non-finite values are detected in {}.".format(name))
