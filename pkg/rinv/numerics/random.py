import hashlib
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError

__all__ = ["RngStream", "rng_draw"]

Size = Optional[Union[int, Tuple[int, ...]]]


def _label_key(label: str) -> Tuple[int, int]:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=16).digest()

    return int.from_bytes(digest[:8], "little"), int.from_bytes(digest[8:], "little")


class RngStream:
    r"""Counter-based random stream keyed by ``(seed, label)``.

    Every draw builds a Philox generator from ``(seed, label, counter)`` and then
    advances ``counter`` by one, so a stream is replayable from those three values
    and streams with distinct labels are independent.

    Args:
        seed (int):
            64-bit seed of the run.
        label (str):
            Name of the stream, e.g. ``"corruption"`` or ``"shuffle"``.
        counter (int):
            Number of draws already taken. Default: ``0``.

    Examples:

        .. code-block:: python

            >>> from rinv.numerics import RngStream
            >>> a = RngStream(7, "corruption")
            >>> b = RngStream(7, "corruption")
            >>> bool((a.uniform(size=4) == b.uniform(size=4)).all())
            True
    """

    def __init__(self, seed: int, label: str = "root", counter: int = 0) -> None:
        self.seed = int(seed) % 2**64
        self.label = label
        self.counter = int(counter)

    def __repr__(self) -> str:
        s = "RngStream("
        s += "seed={seed}"
        s += ", label={label!r}"
        s += ", counter={counter}"
        s += ")"

        return s.format(**self.__dict__)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RngStream):
            return NotImplemented

        return (self.seed, self.label, self.counter) == (other.seed, other.label, other.counter)

    def split(self, label: str) -> "RngStream":
        r"""Child stream labeled ``"<label of self>/<label>"`` with a fresh counter."""
        return RngStream(self.seed, "{}/{}".format(self.label, label))

    def copy(self) -> "RngStream":
        return RngStream(self.seed, self.label, self.counter)

    def generator(self) -> np.random.Generator:
        r"""Return the generator of the current counter and advance the counter."""
        high, low = _label_key(self.label)
        seed_sequence = np.random.SeedSequence(
            entropy=self.seed, spawn_key=(high, low, self.counter)
        )
        self.counter += 1

        return np.random.Generator(np.random.Philox(seed_sequence))

    def uniform(self, low: float = 0.0, high: float = 1.0, size: Size = None) -> np.ndarray:
        return self.generator().uniform(low, high, size=size)

    def standard_normal(self, size: Size = None) -> np.ndarray:
        return self.generator().standard_normal(size=size)

    def integers(self, low: int, high: int, size: Size = None) -> np.ndarray:
        return self.generator().integers(low, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator().permutation(n)

    def index_subset(self, n: int, k: int) -> np.ndarray:
        r"""Sorted subset of ``k`` distinct indices from ``0, ..., n - 1``."""
        if k < 0 or k > n:
            raise DomainError("k should be in [0, {}], but given {}.".format(n, k))

        return np.sort(self.generator().choice(n, size=k, replace=False))


def rng_draw(stream: RngStream, kind: str, *args, **kwargs) -> np.ndarray:
    r"""Draw from ``stream`` by name.

    Args:
        stream (RngStream):
            Stream to draw from. Its counter advances by one.
        kind (str):
            One of ``"uniform"``, ``"standard_normal"``, ``"integers"``,
            ``"permutation"``, and ``"index_subset"``.

    Returns:
        numpy.ndarray of drawn values.
    """
    kinds: Sequence[str] = ["uniform", "standard_normal", "integers", "permutation", "index_subset"]

    if kind not in kinds:
        raise NotImplementedError("Not support {}.".format(kind))

    return getattr(stream, kind)(*args, **kwargs)
