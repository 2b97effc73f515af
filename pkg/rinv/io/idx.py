import struct
from io import BufferedReader
from typing import Optional, Tuple

import numpy as np

from ..errors import DataError, FormatError
from ..utils.dataset import Dataset
from ._atomic import atomic_open

__all__ = ["read_idx", "load_idx", "save_idx", "save_idx_dataset"]

UBYTE = 0x08
FLOAT32 = 0x0D

_dtypes = {UBYTE: np.dtype(">u1"), FLOAT32: np.dtype(">f4")}
_type_codes = {"ubyte": UBYTE, "float32": FLOAT32}


def _read_exact(f: BufferedReader, size: int, offset: int, what: str) -> bytes:
    data = f.read(size)

    if len(data) != size:
        raise FormatError(
            "Truncated {}: {} bytes expected, but {} bytes remain.".format(what, size, len(data)),
            offset=offset,
        )

    return data


def read_idx(path: str) -> Tuple[np.ndarray, int]:
    r"""Read an IDX file.

    Args:
        path (str):
            Path to the file.

    Returns:
        Tuple of the array and its type code (``0x08`` for unsigned bytes,
        ``0x0D`` for float32).
    """
    with open(path, mode="rb") as f:
        magic = _read_exact(f, 4, 0, "magic number")

        if magic[0] != 0 or magic[1] != 0:
            raise FormatError("Invalid magic number {}.".format(magic.hex()), offset=0)

        type_code, ndim = magic[2], magic[3]

        if type_code not in _dtypes:
            raise FormatError("Not support data type 0x{:02X}.".format(type_code), offset=2)

        if ndim == 0:
            raise FormatError("IDX file should have at least one dimension.", offset=3)

        shape = struct.unpack(">{}I".format(ndim), _read_exact(f, 4 * ndim, 4, "dimensions"))
        dtype = _dtypes[type_code]
        offset = 4 + 4 * ndim
        size = int(np.prod(shape)) * dtype.itemsize
        payload = _read_exact(f, size, offset, "payload")

        if len(f.read(1)) > 0:
            raise FormatError("Trailing bytes after payload.", offset=offset + size)

    array = np.frombuffer(payload, dtype=dtype).reshape(shape)

    return array.astype(dtype.newbyteorder("=")), type_code


def load_idx(
    image_path: str,
    label_path: Optional[str] = None,
    class_count: Optional[int] = None,
    split: str = "train",
    name: Optional[str] = None,
) -> Dataset:
    r"""Load images (and labels) stored in IDX files.

    Images are 3-D (n_images, height, width), loaded with one channel,
    or 4-D (n_images, n_channels, height, width). Unsigned bytes are scaled by ``1/255``;
    float32 payloads are taken as they are.

    Args:
        image_path (str):
            Path to the image file.
        label_path (str, optional):
            Path to a 1-D unsigned-byte label file.
        class_count (int, optional):
            Number of classes. ``max(label) + 1`` by default.
        split (str):
            Split tag. Default: ``"train"``.
        name (str, optional):
            Name of the dataset. The image path by default.

    Returns:
        Dataset with pixel values in [0, 1].

    Raises:
        FormatError: If a file is malformed or the counts disagree.
    """
    images, type_code = read_idx(image_path)

    if images.ndim == 3:
        images = images[:, np.newaxis]
    elif images.ndim != 4:
        raise FormatError(
            "Images should be 3-D or 4-D, but given {}-D.".format(images.ndim), offset=3
        )

    if type_code == UBYTE:
        images = images.astype(np.float64) / 255
    else:
        images = images.astype(np.float64)

    labels = None

    if label_path is not None:
        labels, label_type = read_idx(label_path)

        if labels.ndim != 1 or label_type != UBYTE:
            raise FormatError("Labels should be a 1-D unsigned-byte array.", offset=2)

        if len(labels) != len(images):
            raise FormatError(
                "{} labels are given for {} images.".format(len(labels), len(images)), offset=4
            )

        labels = labels.astype(np.int64)

        if class_count is None:
            class_count = int(labels.max()) + 1 if len(labels) > 0 else 0

    if images.size > 0 and (images.min() < 0 or images.max() > 1):
        raise DataError("Pixel values of {} should lie in [0, 1].".format(image_path))

    return Dataset(
        images=images,
        labels=labels,
        class_count=0 if class_count is None else class_count,
        split=split,
        name=image_path if name is None else name,
    )


def save_idx(path: str, array: np.ndarray, dtype: str = "ubyte") -> None:
    r"""Write an array as an IDX file.

    Args:
        path (str):
            Destination. Written atomically.
        array (numpy.ndarray):
            Array to write. With ``dtype="ubyte"``, values in [0, 1] are scaled by 255
            unless the array already holds integers.
        dtype (str):
            ``"ubyte"`` or ``"float32"``. Default: ``"ubyte"``.
    """
    if dtype not in _type_codes:
        raise NotImplementedError("Not support {}.".format(dtype))

    type_code = _type_codes[dtype]
    array = np.asarray(array)

    if array.ndim < 1 or array.ndim > 255:
        raise ValueError("Array should have 1 to 255 dimensions, but given {}.".format(array.ndim))

    if type_code == UBYTE:
        if np.issubdtype(array.dtype, np.integer):
            payload = array.astype(">u1")
        else:
            payload = np.clip(np.round(array * 255), 0, 255).astype(">u1")
    else:
        payload = array.astype(">f4")

    with atomic_open(path) as f:
        f.write(bytes([0, 0, type_code, array.ndim]))
        f.write(struct.pack(">{}I".format(array.ndim), *array.shape))
        f.write(payload.tobytes())


def save_idx_dataset(
    dataset: Dataset, image_path: str, label_path: Optional[str] = None, dtype: str = "ubyte"
) -> None:
    r"""Write a dataset as IDX files. Single-channel images are written in 3-D."""
    images = dataset.images

    if images.shape[1] == 1:
        images = images[:, 0]

    save_idx(image_path, images, dtype=dtype)

    if label_path is not None:
        if dataset.labels is None:
            raise DataError("Dataset {} has no labels.".format(dataset.name))

        save_idx(label_path, dataset.labels.astype(np.uint8), dtype="ubyte")
