from typing import Dict, List, Tuple

import numpy as np

from ...errors import DataError
from ...numerics import RngStream
from .base import Dataset
from .label_shift import LabelShiftMap

__all__ = ["synth_dataset", "synth_shifted_split"]


def _class_parameters(rng: RngStream, class_id: int, height: int, width: int, n_channels: int):
    stream = rng.split("prototypes/class{}".format(class_id))
    orientation, frequency = stream.uniform(size=2) * np.array([np.pi, 1.0])

    return {
        "orientation": float(orientation),
        "frequency": float(1.5 + 2.5 * frequency),
        "center": stream.uniform(0.25, 0.75, size=2) * np.array([height, width]),
        "color": stream.uniform(0.3, 1.0, size=n_channels),
    }


def _shift_parameters(parameters: Dict, rng: RngStream, height: int, width: int) -> Dict:
    shifted = dict(parameters)
    delta = rng.uniform(-1, 1, size=3)
    shifted["orientation"] = parameters["orientation"] + 0.15 * delta[0]
    shifted["frequency"] = parameters["frequency"] * (1 + 0.1 * delta[1])
    shifted["center"] = parameters["center"] + 0.06 * delta[2] * np.array([height, width])

    return shifted


def _render(
    parameters: List[Dict],
    labels: np.ndarray,
    image_shape: Tuple[int, int, int],
    rng: RngStream,
    noise_std: float,
) -> np.ndarray:
    n_channels, height, width = image_shape
    n_images = len(labels)

    y, x = np.meshgrid(np.arange(height), np.arange(width), indexing="ij")
    phases = rng.uniform(0, 2 * np.pi, size=n_images)
    noise = rng.standard_normal(size=(n_images, n_channels, height, width))
    images = np.empty((n_images, n_channels, height, width))

    for idx, label in enumerate(labels):
        p = parameters[label]
        direction = x * np.cos(p["orientation"]) + y * np.sin(p["orientation"])
        grating = 0.5 + 0.5 * np.cos(2 * np.pi * p["frequency"] * direction / width + phases[idx])
        radius2 = (y - p["center"][0]) ** 2 + (x - p["center"][1]) ** 2
        blob = np.exp(-radius2 / (2 * (height / 8) ** 2))
        pattern = 0.35 * grating + 0.6 * blob
        images[idx] = p["color"][:, np.newaxis, np.newaxis] * pattern

    return np.clip(images + noise_std * noise, 0, 1)


def synth_dataset(
    n_classes: int,
    per_class: int,
    channels: int,
    height: int,
    width: int,
    rng: RngStream,
    noise_std: float = 0.05,
    class_offset: int = 0,
    split: str = "train",
    name: str = "synth",
) -> Dataset:
    r"""Generate class-conditional images.

    Every class draws an oriented grating, a blob position, and a color from
    ``rng.split("prototypes/class<id>")`` with ``id = class_offset + c``.
    Samples get a random grating phase and additive noise from ``rng.split("samples/<split>")``,
    so splits of the same stream share their classes but not their images.
    Nonzero ``class_offset`` yields classes disjoint from those of offset ``0``.

    Args:
        n_classes (int):
            Number of classes :math:`k\geq 2`.
        per_class (int):
            Number of images per class.
        channels, height, width (int):
            Image shape.
        rng (RngStream):
            Stream of all draws.
        noise_std (float):
            Standard deviation of the pixel noise. Default: ``0.05``.
        class_offset (int):
            Offset of the class ids used to draw prototypes. Default: ``0``.
        split (str):
            Split tag. Default: ``"train"``.
        name (str):
            Name of the dataset. Default: ``"synth"``.

    Returns:
        Dataset with labels in ``[0, n_classes)`` ordered class by class.

    Examples:

        .. code-block:: python

            >>> from rinv.numerics import RngStream
            >>> from rinv.utils.dataset import synth_dataset
            >>> dataset = synth_dataset(10, 5, 3, 32, 32, RngStream(0, "data"))
            >>> dataset.images.shape
            (50, 3, 32, 32)
    """
    if n_classes < 2:
        raise DataError("At least 2 classes are required, but given {}.".format(n_classes))

    if per_class < 1:
        raise DataError("per_class should be positive, but given {}.".format(per_class))

    parameters = [
        _class_parameters(rng, class_offset + c, height, width, channels) for c in range(n_classes)
    ]
    labels = np.repeat(np.arange(n_classes), per_class)
    images = _render(
        parameters,
        labels,
        (channels, height, width),
        rng.split("samples/{}".format(split)),
        noise_std,
    )

    return Dataset(images=images, labels=labels, class_count=n_classes, split=split, name=name)


def synth_shifted_split(
    n_classes: int,
    per_class: int,
    channels: int,
    height: int,
    width: int,
    rng: RngStream,
    noise_std: float = 0.05,
    split: str = "test",
    name: str = "synth-shifted",
) -> Tuple[Dataset, LabelShiftMap]:
    r"""Held-out sub-clusters of the classes of :func:`synth_dataset`.

    Every external class ``n_classes + c`` perturbs the prototype of training class ``c``
    (orientation, frequency, and blob position). The returned map sends it back to ``c``.

    Returns:
        Tuple of the external dataset (labels in ``[n_classes, 2 * n_classes)``) and its
        :class:`LabelShiftMap`.
    """
    if n_classes < 2:
        raise DataError("At least 2 classes are required, but given {}.".format(n_classes))

    parameters = [_class_parameters(rng, c, height, width, channels) for c in range(n_classes)]
    parameters = [
        _shift_parameters(p, rng.split("shift/class{}".format(c)), height, width)
        for c, p in enumerate(parameters)
    ]
    labels = np.repeat(np.arange(n_classes), per_class)
    images = _render(
        parameters,
        labels,
        (channels, height, width),
        rng.split("samples/shifted/{}".format(split)),
        noise_std,
    )
    dataset = Dataset(
        images=images,
        labels=labels + n_classes,
        class_count=2 * n_classes,
        split=split,
        name=name,
    )
    label_map = LabelShiftMap({n_classes + c: c for c in range(n_classes)}, n_classes)

    return dataset, label_map
