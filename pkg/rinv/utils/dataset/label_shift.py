from typing import Any, Dict, Iterable, Mapping, Tuple, Union

import numpy as np

from ...errors import DataError

__all__ = ["LabelShiftMap"]


class LabelShiftMap:
    r"""Relabeling of external classes onto classes of the training task.

    Args:
        pairs (mapping or iterable of tuple):
            Pairs of (external class id, training class id).
        n_train_classes (int):
            Number of training classes. Every target id should be below it.
    """

    def __init__(
        self, pairs: Union[Mapping[int, int], Iterable[Tuple[int, int]]], n_train_classes: int
    ) -> None:
        if isinstance(pairs, Mapping):
            pairs = pairs.items()

        mapping = {int(source): int(target) for source, target in pairs}

        invalid = sorted(t for t in mapping.values() if not 0 <= t < n_train_classes)

        if len(invalid) > 0:
            raise DataError(
                "Targets {} are not training classes in [0, {}).".format(invalid, n_train_classes)
            )

        self.mapping = mapping
        self.n_train_classes = n_train_classes

    def __repr__(self) -> str:
        return "LabelShiftMap({}, n_train_classes={})".format(self.mapping, self.n_train_classes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelShiftMap):
            return NotImplemented

        return (self.mapping, self.n_train_classes) == (other.mapping, other.n_train_classes)

    @classmethod
    def identity(cls, n_classes: int) -> "LabelShiftMap":
        return cls({c: c for c in range(n_classes)}, n_classes)

    def relabel(self, labels: np.ndarray) -> np.ndarray:
        r"""Map external labels to training labels.

        Raises:
            DataError: If a label has no entry in the map.
        """
        labels = np.asarray(labels, dtype=np.int64)
        unmapped = sorted(set(np.unique(labels).tolist()) - set(self.mapping))

        if len(unmapped) > 0:
            raise DataError("Classes {} are not mapped.".format(unmapped))

        lookup = np.vectorize(self.mapping.__getitem__, otypes=[np.int64])

        return lookup(labels) if len(labels) > 0 else labels

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pairs": [[source, target] for source, target in sorted(self.mapping.items())],
            "n_train_classes": self.n_train_classes,
        }

    @classmethod
    def from_dict(cls, spec: Dict[str, Any]) -> "LabelShiftMap":
        return cls([tuple(pair) for pair in spec["pairs"]], spec["n_train_classes"])
