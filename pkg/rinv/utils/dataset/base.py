import dataclasses
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from ...errors import DataError, DimensionError
from ...numerics import RngStream

__all__ = ["Dataset", "splits", "stratified_subset"]

splits = ["train", "val", "test"]


@dataclass(frozen=True, eq=False)
class Dataset:
    r"""Images with optional labels.

    Attributes:
        images (numpy.ndarray):
            Images with shape of (n_images, n_channels, height, width) in [0, 1].
        labels (numpy.ndarray, optional):
            Labels in ``[0, class_count)`` with shape of (n_images,).
        class_count (int):
            Number of classes of the task.
        split (str):
            ``"train"``, ``"val"``, or ``"test"``.
        name (str):
            Name used in reports.
    """

    images: np.ndarray
    labels: Optional[np.ndarray] = None
    class_count: int = 0
    split: str = "train"
    name: str = "dataset"

    def __post_init__(self) -> None:
        if self.images.ndim != 4:
            raise DimensionError(
                "Images with shape of (n_images, n_channels, height, width) are expected, "
                "but given {}.".format(self.images.shape)
            )

        if self.split not in splits:
            raise DataError("split should be one of {}, but given {}.".format(splits, self.split))

        if self.images.size > 0 and (self.images.min() < 0 or self.images.max() > 1):
            raise DataError("Pixel values should lie in [0, 1].")

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            object.__setattr__(self, "labels", labels)

            if labels.shape != (len(self.images),):
                raise DimensionError(
                    "{} labels are given for {} images.".format(len(labels), len(self.images))
                )

            if len(labels) > 0 and (labels.min() < 0 or labels.max() >= self.class_count):
                raise DataError(
                    "Labels should be in [0, {}), but given range [{}, {}].".format(
                        self.class_count, labels.min(), labels.max()
                    )
                )

    def __len__(self) -> int:
        return len(self.images)

    def __repr__(self) -> str:
        s = "Dataset("
        s += "name={}".format(self.name)
        s += ", split={}".format(self.split)
        s += ", n_images={}".format(len(self))
        s += ", image_shape={}".format(self.image_shape)
        s += ", class_count={}".format(self.class_count)
        s += ", labeled={}".format(self.labeled)
        s += ")"

        return s

    @property
    def image_shape(self):
        return self.images.shape[1:]

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    def class_counts(self) -> np.ndarray:
        if self.labels is None:
            raise DataError("Dataset {} has no labels.".format(self.name))

        return np.bincount(self.labels, minlength=self.class_count)

    def subset(self, indices: np.ndarray) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        labels = None if self.labels is None else self.labels[indices]

        return dataclasses.replace(self, images=self.images[indices], labels=labels)

    def without_labels(self) -> "Dataset":
        return dataclasses.replace(self, labels=None)

    def replace(self, **changes) -> "Dataset":
        return dataclasses.replace(self, **changes)

    def batch_indices(
        self, batch_size: int, rng: Optional[RngStream] = None, drop_last: bool = False
    ) -> Iterator[np.ndarray]:
        r"""Yield index batches, shuffled when ``rng`` is given.

        Args:
            batch_size (int):
                Number of images per batch.
            rng (RngStream, optional):
                Stream of the permutation. Sequential order by default.
            drop_last (bool):
                Drop the last batch if it is smaller than ``batch_size``.
        """
        if batch_size < 1:
            raise DataError("batch_size should be positive, but given {}.".format(batch_size))

        if rng is None:
            order = np.arange(len(self))
        else:
            order = rng.permutation(len(self))

        for start in range(0, len(self), batch_size):
            indices = order[start : start + batch_size]

            if drop_last and len(indices) < batch_size:
                break

            yield indices


def stratified_subset(dataset: Dataset, fraction: float, rng: RngStream) -> Dataset:
    r"""Keep ``round(fraction * n_c)`` images of every class ``c``.

    Args:
        dataset (Dataset):
            Labeled dataset.
        fraction (float):
            Fraction in (0, 1].
        rng (RngStream):
            Stream of the per-class choices.

    Returns:
        Dataset with images in their original order.

    Raises:
        DataError: If a present class would keep no image.
    """
    if not 0 < fraction <= 1:
        raise DataError("fraction should be in (0, 1], but given {}.".format(fraction))

    counts = dataset.class_counts()

    if fraction == 1:
        return dataset

    selected = []
    uncovered = []

    for c in range(dataset.class_count):
        if counts[c] == 0:
            continue

        n_kept = int(round(fraction * counts[c]))

        if n_kept == 0:
            uncovered.append(c)
            continue

        (members,) = np.nonzero(dataset.labels == c)
        selected.append(members[rng.index_subset(counts[c], n_kept)])

    if len(uncovered) > 0:
        raise DataError(
            "Fraction {} leaves classes {} without labeled images.".format(fraction, uncovered)
        )

    return dataset.subset(np.sort(np.concatenate(selected)))
