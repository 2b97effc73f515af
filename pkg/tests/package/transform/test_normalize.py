import numpy as np
import pytest
from dummy.models import random_images

from rinv.corruptions import ForwardOperator, ImageBatch, apply
from rinv.errors import ContractError, DataError, DimensionError
from rinv.numerics import RngStream
from rinv.transform import channel_statistics, normalize

parameters_statistics = [
    (0.5, 0.5),
    (np.array([0.4, 0.5, 0.6]), np.array([0.2, 0.25, 0.3])),
]


@pytest.mark.parametrize("mean, std", parameters_statistics)
def test_normalize(mean, std):
    images = random_images()

    batch = normalize(ImageBatch(images), mean=mean, std=std)
    expected = (images - np.reshape(mean, (-1, 1, 1))) / np.reshape(std, (-1, 1, 1))

    assert batch.normalized
    assert np.allclose(batch.values, expected)


def test_corrupt_then_normalize():
    images = random_images()
    rng = RngStream(0, "corruption")

    corrupted = apply(ForwardOperator.mask(0.5), ImageBatch(images), rng)
    batch = normalize(corrupted)

    # masked pixels map to -mean/std
    assert np.all(batch.values[corrupted.values == 0] == -1)

    with pytest.raises(ContractError):
        apply(ForwardOperator.mask(0.5), batch, rng)

    with pytest.raises(ContractError):
        normalize(batch)


def test_channel_statistics():
    images = random_images(n_images=16)

    mean, std = channel_statistics(images)

    assert np.allclose(mean, images.mean(axis=(0, 2, 3)))
    assert np.allclose(std, images.std(axis=(0, 2, 3)))

    _, std = channel_statistics(np.zeros((2, 1, 4, 4)))

    assert np.all(std == 1)

    with pytest.raises(DataError):
        channel_statistics(np.zeros((0, 3, 4, 4)))


def test_normalize_invalid_statistics():
    with pytest.raises(DimensionError):
        normalize(ImageBatch(random_images()), mean=np.zeros(2))
