from typing import Optional

__all__ = [
    "RinvError",
    "DimensionError",
    "DomainError",
    "ContractError",
    "DegenerateEmbeddingError",
    "NumericError",
    "ConfigError",
    "DataError",
    "BatchSizeError",
    "FormatError",
]


class RinvError(Exception):
    r"""Base class of errors raised by ``rinv``."""


class DimensionError(RinvError, ValueError):
    r"""Shapes of operands are incompatible."""


class DomainError(RinvError, ValueError):
    r"""A parameter lies outside of its legal domain."""


class ContractError(RinvError, RuntimeError):
    r"""A call-order or state contract is violated."""


class DegenerateEmbeddingError(RinvError, FloatingPointError):
    r"""An embedding row is too close to zero to be normalized."""


class NumericError(RinvError, FloatingPointError):
    r"""Non-finite values are detected in verification mode."""


class ConfigError(RinvError, ValueError):
    r"""A configuration is invalid."""


class DataError(RinvError, ValueError):
    r"""A dataset cannot serve the requested operation."""


class BatchSizeError(DataError):
    r"""A batch is too small, e.g. no negatives are available."""


class FormatError(RinvError, ValueError):
    r"""A binary file cannot be parsed.

    Args:
        message (str):
            Description of the failure.
        offset (int, optional):
            Byte offset at which parsing failed.
        entry (str, optional):
            Name of the checkpoint entry being parsed.
    """

    def __init__(
        self, message: str, offset: Optional[int] = None, entry: Optional[str] = None
    ) -> None:
        details = []

        if entry is not None:
            details.append("entry={}".format(repr(entry)))

        if offset is not None:
            details.append("offset={}".format(offset))

        if len(details) > 0:
            message = "{} ({})".format(message, ", ".join(details))

        super().__init__(message)

        self.offset = offset
        self.entry = entry
