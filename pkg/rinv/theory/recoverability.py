import hashlib
import logging
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..corruptions import ForwardOperator, ImageBatch, apply
from ..encoders import EncoderModel, embed
from ..errors import ConfigError, DataError
from ..numerics import RngStream
from ..transform import DEFAULT_MEAN, DEFAULT_STD, normalize

__all__ = ["CollisionPair", "RecoverabilityReport", "check_recoverability"]

logger = logging.getLogger(__name__)

COSINE_DISTANCE_TOLERANCE = 1e-6


@dataclass
class CollisionPair:
    r"""Two images whose corruptions coincide while their teacher embeddings differ."""

    first: int
    second: int
    cosine_distance: float


@dataclass
class RecoverabilityReport:
    r"""Outcome of scanning a dataset for corrupted-input collisions.

    Attributes:
        operator (str):
            Description of the operator instance.
        n_images (int):
            Number of scanned images.
        n_collision_groups (int):
            Number of groups of two or more images with identical corrupted inputs.
        n_violations (int):
            Number of colliding pairs whose teacher embeddings differ by more than
            ``1e-6`` in cosine distance.
        violations (list of CollisionPair):
            Violating pairs, at most ``max_pairs`` of them.
    """

    operator: str
    n_images: int
    n_collision_groups: int
    n_violations: int
    violations: List[CollisionPair] = field(default_factory=list)

    @property
    def recoverable(self) -> bool:
        return self.n_violations == 0

    def to_dict(self) -> Dict[str, Any]:
        output = asdict(self)
        output["recoverable"] = self.recoverable

        return output


def _teacher_embeddings(
    images: np.ndarray, teacher: EncoderModel, mean, std, batch_size: int
) -> np.ndarray:
    outputs = []

    for start in range(0, len(images), batch_size):
        batch = normalize(ImageBatch(images[start : start + batch_size]), mean=mean, std=std)
        outputs.append(embed(teacher, batch).data.astype(np.float64))

    output = np.concatenate(outputs, axis=0)

    return output / np.linalg.norm(output, axis=1, keepdims=True)


def check_recoverability(
    images: np.ndarray,
    op_instance: ForwardOperator,
    teacher: EncoderModel,
    rng: RngStream,
    mean=DEFAULT_MEAN,
    std=DEFAULT_STD,
    batch_size: int = 256,
    max_pairs: Optional[int] = None,
) -> RecoverabilityReport:
    r"""Check whether equal corrupted inputs imply equal teacher embeddings.

    Every image is corrupted with the same realization of the operator
    (a copy of ``rng`` in the same state), corrupted images are hashed,
    and the teacher embeddings within each collision group are compared.

    Args:
        images (numpy.ndarray):
            Clean images with shape of (n_images, n_channels, height, width).
        op_instance (ForwardOperator):
            Operator with fixed severities.
        teacher (EncoderModel):
            Teacher encoder.
        rng (RngStream):
            Stream of the shared realization. It is not advanced.
        mean, std:
            Normalization applied before the teacher. Default: ``0.5`` and ``0.5``.
        batch_size (int):
            Batch size of the teacher forward passes. Default: ``256``.
        max_pairs (int, optional):
            Largest number of violating pairs kept in the report.

    Returns:
        RecoverabilityReport.
    """
    if op_instance.is_ranged:
        raise ConfigError(
            "A fixed-severity operator is expected, but given {}.".format(op_instance.describe())
        )

    if len(images) == 0:
        raise DataError("Recoverability of an empty dataset is undefined.")

    groups: Dict[bytes, List[int]] = defaultdict(list)

    for idx in range(len(images)):
        corrupted = apply(op_instance, ImageBatch(images[idx : idx + 1]), rng.copy())
        digest = hashlib.blake2b(np.ascontiguousarray(corrupted.values).tobytes()).digest()
        groups[digest].append(idx)

    collisions = [members for members in groups.values() if len(members) > 1]
    violations: List[Tuple[int, int, float]] = []
    n_violations = 0

    if len(collisions) > 0:
        colliding = sorted(idx for members in collisions for idx in members)
        position = {idx: n for n, idx in enumerate(colliding)}
        embeddings = _teacher_embeddings(images[colliding], teacher, mean, std, batch_size)

        for members in collisions:
            E = embeddings[[position[idx] for idx in members]]
            distance = 1 - E @ E.T
            first, second = np.nonzero(np.triu(distance > COSINE_DISTANCE_TOLERANCE, k=1))
            n_violations += len(first)

            for a, b in zip(first, second):
                if max_pairs is not None and len(violations) >= max_pairs:
                    break

                violations.append((members[a], members[b], float(distance[a, b])))

    logger.info(
        "%s: %d collision groups, %d violating pairs",
        op_instance.describe(),
        len(collisions),
        n_violations,
    )

    return RecoverabilityReport(
        operator=op_instance.describe(),
        n_images=len(images),
        n_collision_groups=len(collisions),
        n_violations=n_violations,
        violations=[CollisionPair(*pair) for pair in sorted(violations)],
    )
