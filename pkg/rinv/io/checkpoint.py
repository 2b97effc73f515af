import json
import struct
from collections import OrderedDict
from typing import Dict, Optional

import numpy as np

from ..encoders import EncoderConfig, EncoderModel, LinearHead, parameter_shapes
from ..errors import FormatError
from ._atomic import atomic_open

__all__ = [
    "MAGIC",
    "FORMAT_VERSION",
    "sidecar_path",
    "write_entries",
    "read_entries",
    "save_checkpoint",
    "load_checkpoint",
    "load_head",
    "save_head",
]

MAGIC = b"RINV"
FORMAT_VERSION = 1

_u32 = struct.Struct("<I")


def sidecar_path(path: str) -> str:
    return path + ".json"


def write_entries(path: str, entries: Dict[str, np.ndarray]) -> None:
    r"""Write named arrays in the RINV container.

    Layout (little-endian): magic ``RINV``, format version (u32), entry count (u32),
    and per entry the name length (u32), UTF-8 name, rank (u32), dimensions (u32 each),
    and the float32 payload.
    """
    with atomic_open(path) as f:
        f.write(MAGIC)
        f.write(_u32.pack(FORMAT_VERSION))
        f.write(_u32.pack(len(entries)))

        for name, array in entries.items():
            array = np.asarray(array)
            encoded = name.encode("utf-8")
            f.write(_u32.pack(len(encoded)))
            f.write(encoded)
            f.write(_u32.pack(array.ndim))
            f.write(struct.pack("<{}I".format(array.ndim), *array.shape))
            f.write(np.ascontiguousarray(array, dtype="<f4").tobytes())


def read_entries(path: str) -> "OrderedDict[str, np.ndarray]":
    r"""Read named arrays from the RINV container.

    Raises:
        FormatError: On bad magic, unknown version, or truncation.
            ``entry`` names the entry being read when the file ends.
    """
    with open(path, mode="rb") as f:
        data = f.read()

    offset = 0
    entry = None

    def take(size: int) -> bytes:
        nonlocal offset

        if offset + size > len(data):
            what = "header" if entry is None else "entry {}".format(entry)
            raise FormatError(
                "Truncated {} in {}.".format(what, path), offset=offset, entry=entry
            )

        chunk = data[offset : offset + size]
        offset += size

        return chunk

    magic = take(4)

    if magic != MAGIC:
        raise FormatError("Invalid magic {!r} in {}.".format(magic, path), offset=0)

    (version,) = _u32.unpack(take(4))

    if version != FORMAT_VERSION:
        raise FormatError(
            "Format version {} is expected, but given {}.".format(FORMAT_VERSION, version),
            offset=4,
        )

    (n_entries,) = _u32.unpack(take(4))
    entries = OrderedDict()

    for idx in range(n_entries):
        entry = "#{}".format(idx)
        (name_length,) = _u32.unpack(take(4))

        try:
            entry = take(name_length).decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError("Entry name is not UTF-8.", offset=offset, entry=entry) from e

        (rank,) = _u32.unpack(take(4))
        shape = struct.unpack("<{}I".format(rank), take(4 * rank))
        size = int(np.prod(shape, dtype=np.int64))
        payload = take(4 * size)
        entries[entry] = np.frombuffer(payload, dtype="<f4").reshape(shape).copy()

    if offset != len(data):
        raise FormatError("Trailing bytes after the last entry.", offset=offset)

    return entries


def _write_sidecar(path: str, sidecar: Dict) -> None:
    with atomic_open(sidecar_path(path), mode="w") as f:
        json.dump(sidecar, f, indent=2, sort_keys=True)
        f.write("\n")


def _read_sidecar(path: str) -> Dict:
    try:
        with open(sidecar_path(path)) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError("Sidecar of {} is not valid JSON.".format(path), offset=e.pos) from e


def save_checkpoint(path: str, model: EncoderModel, head: Optional[LinearHead] = None) -> None:
    r"""Save an encoder (and optionally its linear head).

    Parameters are cast to float32. The architecture goes to ``<path>.json``.

    Args:
        path (str):
            Destination of the binary container.
        model (EncoderModel):
            Encoder to save.
        head (LinearHead, optional):
            Head stored as ``head.weight`` and ``head.bias``.
    """
    entries = model.state_dict()

    if head is not None:
        entries.update(head.state_dict())

    write_entries(path, entries)
    _write_sidecar(
        path,
        {
            "format_version": FORMAT_VERSION,
            "kind": "encoder" if head is None else "classifier",
            "encoder": model.config.to_dict(),
        },
    )


def load_checkpoint(
    path: str, frozen: bool = False, dtype: Optional[np.dtype] = None
) -> EncoderModel:
    r"""Load the encoder saved by :func:`save_checkpoint`.

    Args:
        path (str):
            Path to the binary container.
        frozen (bool):
            Load as a frozen model. Default: ``False``.
        dtype (numpy.dtype, optional):
            Floating point type of the parameters. The active precision by default.

    Returns:
        EncoderModel.
    """
    sidecar = _read_sidecar(path)

    if sidecar.get("format_version") != FORMAT_VERSION or "encoder" not in sidecar:
        raise FormatError("Sidecar of {} does not describe an encoder.".format(path))

    config = EncoderConfig.from_dict(sidecar["encoder"])
    entries = read_entries(path)

    for name, shape in parameter_shapes(config).items():
        if name not in entries:
            raise FormatError("Entry {} is missing.".format(name), entry=name)

        if entries[name].shape != shape:
            raise FormatError(
                "Entry {} should have shape of {}, but given {}.".format(
                    name, shape, entries[name].shape
                ),
                entry=name,
            )

    return EncoderModel.from_state_dict(config, entries, frozen=frozen, dtype=dtype)


def save_head(path: str, head: LinearHead) -> None:
    r"""Save a linear head on its own (e.g. a probe over a frozen encoder)."""
    write_entries(path, head.state_dict())
    _write_sidecar(
        path,
        {
            "format_version": FORMAT_VERSION,
            "kind": "head",
            "embed_dim": head.embed_dim,
            "n_classes": head.n_classes,
        },
    )


def load_head(path: str, requires_grad: bool = False) -> Optional[LinearHead]:
    r"""Load the linear head stored in a checkpoint, or ``None`` if there is none."""
    entries = read_entries(path)

    if "head.weight" not in entries or "head.bias" not in entries:
        return None

    return LinearHead.from_state_dict(entries, requires_grad=requires_grad)
