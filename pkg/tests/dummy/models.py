import numpy as np

from rinv.encoders import EncoderConfig, build_encoder, build_head
from rinv.numerics import RngStream
from rinv.utils.dataset import Dataset, synth_dataset

image_shape = (1, 8, 8)


def tiny_encoder_config(architecture: str = "small_conv", embed_dim: int = 4) -> EncoderConfig:
    if architecture == "small_conv":
        widths = (2, 3, 4)
    else:
        widths = (6,)

    return EncoderConfig(
        architecture=architecture, input_shape=image_shape, embed_dim=embed_dim, widths=widths
    )


def tiny_encoder(architecture: str = "small_conv", embed_dim: int = 4, seed: int = 0, frozen=False):
    model = build_encoder(tiny_encoder_config(architecture, embed_dim), RngStream(seed, "init"))

    if frozen:
        return model.copy(frozen=True)

    return model


def tiny_head(embed_dim: int = 4, n_classes: int = 3, seed: int = 0):
    return build_head(embed_dim, n_classes, rng=RngStream(seed, "head"), init="normal")


def tiny_dataset(
    n_classes: int = 3, per_class: int = 8, seed: int = 0, split: str = "train"
) -> Dataset:
    return synth_dataset(n_classes, per_class, *image_shape, RngStream(seed, "data"), split=split)


def random_images(n_images: int = 4, shape=(3, 8, 8), seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).random((n_images,) + tuple(shape))
