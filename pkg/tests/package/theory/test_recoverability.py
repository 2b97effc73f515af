import numpy as np
from dummy.models import image_shape, random_images, tiny_encoder

from rinv.corruptions import ForwardOperator
from rinv.numerics import RngStream
from rinv.theory import check_recoverability


def test_recoverability_identity():
    images = random_images(8, shape=image_shape)
    teacher = tiny_encoder(frozen=True)

    report = check_recoverability(images, ForwardOperator.identity(), teacher, RngStream(0, "r"))

    assert report.recoverable
    assert report.n_collision_groups == 0
    assert report.n_images == 8


def test_recoverability_full_mask():
    images = random_images(4, shape=image_shape)
    teacher = tiny_encoder(frozen=True)

    # every image maps to the all-zero input
    report = check_recoverability(
        images, ForwardOperator.mask(1.0), teacher, RngStream(0, "r"), max_pairs=2
    )

    assert not report.recoverable
    assert report.n_collision_groups == 1
    assert report.n_violations == 6
    assert len(report.violations) == 2
    assert report.to_dict()["recoverable"] is False


def test_recoverability_duplicates():
    images = random_images(3, shape=image_shape)
    images = np.concatenate([images, images[:1]])
    teacher = tiny_encoder(frozen=True)

    # identical clean images collide, but share their teacher embedding
    report = check_recoverability(images, ForwardOperator.mask(0.5), teacher, RngStream(0, "r"))

    assert report.n_collision_groups == 1
    assert report.recoverable
