from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..corruptions import ImageBatch
from ..errors import ContractError, DimensionError
from ..numerics import RngStream, Tensor
from ..numerics import functional as F
from .config import EncoderConfig
from .head import LinearHead

__all__ = [
    "EncoderModel",
    "Classifier",
    "parameter_shapes",
    "build_encoder",
    "embed",
    "teacher_from_supervised",
    "student_from_teacher",
]


def parameter_shapes(config: EncoderConfig) -> "OrderedDict[str, Tuple[int, ...]]":
    r"""Names and shapes of the parameters of ``config``'s architecture."""
    n_channels, height, width = config.input_shape
    shapes = OrderedDict()

    if config.architecture == "small_conv":
        n_in = n_channels

        for idx, n_out in enumerate(config.widths):
            shapes["conv{}.weight".format(idx + 1)] = (n_out, n_in, 3, 3)
            shapes["conv{}.bias".format(idx + 1)] = (n_out,)
            n_in = n_out
    else:
        n_in = n_channels * height * width

        for idx, n_out in enumerate(config.widths):
            shapes["fc{}.weight".format(idx + 1)] = (n_in, n_out)
            shapes["fc{}.bias".format(idx + 1)] = (n_out,)
            n_in = n_out

    shapes["proj.weight"] = (n_in, config.embed_dim)
    shapes["proj.bias"] = (config.embed_dim,)

    return shapes


class EncoderModel:
    r"""Map from normalized images to (unit-norm) embeddings.

    Args:
        config (EncoderConfig):
            Architecture.
        params (dict of Tensor):
            Parameters keyed by name, as given by :func:`parameter_shapes`.
        frozen (bool):
            Frozen models hold constant tensors and cannot be optimized.
            Default: ``False``.
    """

    def __init__(
        self, config: EncoderConfig, params: Dict[str, Tensor], frozen: bool = False
    ) -> None:
        shapes = parameter_shapes(config)

        if list(params) != list(shapes):
            raise DimensionError(
                "Parameters {} are expected, but given {}.".format(list(shapes), list(params))
            )

        for name, shape in shapes.items():
            if params[name].shape != shape:
                raise DimensionError(
                    "Parameter {} should have shape of {}, but given {}.".format(
                        name, shape, params[name].shape
                    )
                )

        self.config = config
        self.params = OrderedDict(params)
        self.frozen = frozen

        for param in self.params.values():
            param.requires_grad = not frozen
            param.grad = None if frozen else np.zeros_like(param.data)

    def __repr__(self) -> str:
        s = "EncoderModel("
        s += "architecture={}".format(self.config.architecture)
        s += ", embed_dim={}".format(self.config.embed_dim)
        s += ", n_parameters={}".format(self.n_parameters)
        s += ", frozen={}".format(self.frozen)
        s += ")"

        return s

    def __call__(self, batch: ImageBatch) -> Tensor:
        return self.embed(batch)

    @property
    def n_parameters(self) -> int:
        return int(sum(param.data.size for param in self.params.values()))

    @property
    def dtype(self) -> np.dtype:
        return next(iter(self.params.values())).dtype

    def parameters(self) -> List[Tensor]:
        return list(self.params.values())

    def state_dict(self) -> Dict[str, np.ndarray]:
        return OrderedDict((name, param.data.copy()) for name, param in self.params.items())

    @classmethod
    def from_state_dict(
        cls,
        config: EncoderConfig,
        state: Dict[str, np.ndarray],
        frozen: bool = False,
        dtype: Optional[np.dtype] = None,
    ) -> "EncoderModel":
        params = OrderedDict()

        for name in parameter_shapes(config):
            if name not in state:
                raise DimensionError("Parameter {} is missing.".format(name))

            params[name] = Tensor(state[name], dtype=dtype, name=name)

        return cls(config, params, frozen=frozen)

    def copy(self, frozen: Optional[bool] = None, dtype: Optional[np.dtype] = None):
        r"""Copy sharing no buffers with ``self``."""
        if frozen is None:
            frozen = self.frozen

        if dtype is None:
            dtype = self.dtype

        return EncoderModel.from_state_dict(
            self.config, self.state_dict(), frozen=frozen, dtype=dtype
        )

    def to(self, dtype: np.dtype) -> "EncoderModel":
        return self.copy(dtype=dtype)

    def zero_grad(self) -> None:
        for param in self.params.values():
            param.zero_grad()

    def features(self, values: np.ndarray) -> Tensor:
        r"""Forward pass without the final normalization.

        Args:
            values (numpy.ndarray):
                Normalized images with shape of (batch_size, n_channels, height, width).

        Returns:
            Tensor with shape of (batch_size, embed_dim).
        """
        if values.shape[1:] != self.config.input_shape:
            raise DimensionError(
                "Images of shape {} are expected, but given {}.".format(
                    self.config.input_shape, values.shape[1:]
                )
            )

        x = Tensor(values, dtype=self.dtype)
        p = self.params

        if self.config.architecture == "small_conv":
            for idx in range(len(self.config.widths)):
                weight = p["conv{}.weight".format(idx + 1)]
                bias = p["conv{}.bias".format(idx + 1)]
                x = F.conv2d(x, weight)
                x = F.relu(x + F.reshape(bias, (1, -1, 1, 1)))

                if idx == 1:
                    x = F.avg_pool2d(x, kernel_size=2)

            x = F.global_avg_pool(x)
        else:
            x = F.reshape(x, (values.shape[0], -1))

            for idx in range(len(self.config.widths)):
                weight = p["fc{}.weight".format(idx + 1)]
                bias = p["fc{}.bias".format(idx + 1)]
                x = F.relu(F.affine(x, weight, bias))

        return F.affine(x, p["proj.weight"], p["proj.bias"])

    def embed(self, batch: ImageBatch) -> Tensor:
        return embed(self, batch)


@dataclass
class Classifier:
    r"""Encoder trained jointly with a linear head."""

    encoder: EncoderModel
    head: LinearHead

    def logits(self, batch: ImageBatch) -> Tensor:
        return self.head(self.encoder.embed(batch))

    def parameters(self) -> List[Tensor]:
        return self.encoder.parameters() + self.head.parameters()


def build_encoder(config: EncoderConfig, rng: RngStream) -> EncoderModel:
    r"""Initialize an encoder.

    Weights are drawn from :math:`\mathcal{N}(0, 2/\mathrm{fan\_in})` and biases are zero.
    With ``config.init="zeros"``, every parameter is zero.

    Args:
        config (EncoderConfig):
            Architecture.
        rng (RngStream):
            Stream of initial draws. Every parameter draws from its own child stream
            labeled by the parameter name.

    Returns:
        Trainable EncoderModel.

    Examples:

        .. code-block:: python

            >>> from rinv.encoders import EncoderConfig, build_encoder
            >>> from rinv.numerics import RngStream
            >>> config = EncoderConfig(input_shape=(1, 8, 8), embed_dim=4, widths=(2, 2, 2))
            >>> model = build_encoder(config, RngStream(0, "init"))
            >>> model.n_parameters == config.n_parameters
            True
    """
    params = OrderedDict()

    for name, shape in parameter_shapes(config).items():
        if config.init == "zeros" or name.endswith(".bias"):
            data = np.zeros(shape)
        else:
            if len(shape) == 4:
                fan_in = shape[1] * shape[2] * shape[3]
            else:
                fan_in = shape[0]

            data = rng.split(name).standard_normal(size=shape) * np.sqrt(2 / fan_in)

        params[name] = Tensor(data, name=name)

    return EncoderModel(config, params, frozen=False)


def embed(model: EncoderModel, batch: ImageBatch) -> Tensor:
    r"""Embed a normalized batch.

    Args:
        model (EncoderModel):
            Encoder.
        batch (ImageBatch):
            Batch with ``normalized=True``.

    Returns:
        Tensor with shape of (batch_size, embed_dim). Rows have unit norm
        when ``model.config.normalize_output`` is set.
    """
    if not batch.normalized:
        raise ContractError("Encoders take normalized batches.")

    output = model.features(batch.values)

    if model.config.normalize_output:
        output = F.l2_normalize_rows(output)

    return output


def teacher_from_supervised(classifier: Classifier) -> EncoderModel:
    r"""Strip the head of a supervised classifier and freeze the encoder.

    Args:
        classifier (Classifier):
            Encoder trained with a classification head on clean images.

    Returns:
        Frozen EncoderModel with output normalization on.
    """
    encoder = classifier.encoder

    if not encoder.config.normalize_output:
        config = EncoderConfig.from_dict({**encoder.config.to_dict(), "normalize_output": True})
        return EncoderModel.from_state_dict(
            config, encoder.state_dict(), frozen=True, dtype=encoder.dtype
        )

    return encoder.copy(frozen=True)


def student_from_teacher(teacher: EncoderModel) -> EncoderModel:
    r"""Trainable copy of the teacher sharing no buffers with it."""
    return teacher.copy(frozen=False)
