import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, Tuple

from ..errors import ConfigError

__all__ = ["EncoderConfig", "architectures", "inits"]

architectures = ["small_conv", "mlp"]
inits = ["he", "zeros"]


@dataclass(frozen=True)
class EncoderConfig:
    r"""Architecture of an encoder.

    Attributes:
        architecture (str):
            ``"small_conv"`` or ``"mlp"``.
        input_shape (tuple of int):
            Shape of one image, (n_channels, height, width).
        embed_dim (int):
            Embedding dimension :math:`d\geq 2`. Default: ``64``.
        widths (tuple of int):
            Layer widths. ``small_conv`` takes exactly three channel counts.
            Default: ``(16, 32, 32)``.
        normalize_output (bool):
            Project embeddings onto the unit sphere. Default: ``True``.
        init (str):
            ``"he"`` (fan-in scaled normal draws) or ``"zeros"``. Default: ``"he"``.
    """

    architecture: str = "small_conv"
    input_shape: Tuple[int, int, int] = (3, 32, 32)
    embed_dim: int = 64
    widths: Tuple[int, ...] = (16, 32, 32)
    normalize_output: bool = True
    init: str = "he"

    def __post_init__(self) -> None:
        # JSON yields lists
        object.__setattr__(self, "input_shape", tuple(int(n) for n in self.input_shape))
        object.__setattr__(self, "widths", tuple(int(n) for n in self.widths))

        if self.architecture not in architectures:
            raise ConfigError(
                "architecture should be one of {}, but given {}.".format(
                    architectures, self.architecture
                )
            )

        if self.init not in inits:
            raise ConfigError("init should be one of {}, but given {}.".format(inits, self.init))

        if len(self.input_shape) != 3 or min(self.input_shape) < 1:
            raise ConfigError(
                "input_shape should be (n_channels, height, width), but given {}.".format(
                    self.input_shape
                )
            )

        if self.embed_dim < 2:
            raise ConfigError(
                "embed_dim should be at least 2, but given {}.".format(self.embed_dim)
            )

        if len(self.widths) == 0 or min(self.widths) < 1:
            raise ConfigError(
                "widths should be nonempty and positive, but given {}.".format(self.widths)
            )

        if self.architecture == "small_conv":
            if len(self.widths) != 3:
                raise ConfigError(
                    "small_conv takes three widths, but given {}.".format(self.widths)
                )

            _, height, width = self.input_shape

            if height % 2 != 0 or width % 2 != 0:
                raise ConfigError(
                    "small_conv pools by 2, so height and width should be even, "
                    "but given {}.".format(self.input_shape)
                )

    @property
    def n_parameters(self) -> int:
        r"""Number of scalar parameters of the architecture."""
        n_channels, height, width = self.input_shape

        if self.architecture == "small_conv":
            n_in = n_channels
            count = 0

            for n_out in self.widths:
                count += n_out * n_in * 9 + n_out
                n_in = n_out

            return count + n_in * self.embed_dim + self.embed_dim

        n_in = n_channels * height * width
        count = 0

        for n_out in self.widths:
            count += n_in * n_out + n_out
            n_in = n_out

        return count + n_in * self.embed_dim + self.embed_dim

    def to_dict(self) -> Dict[str, Any]:
        output = dataclasses.asdict(self)
        output["input_shape"] = list(self.input_shape)
        output["widths"] = list(self.widths)

        return output

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "EncoderConfig":
        fields = {field.name for field in dataclasses.fields(cls)}
        unknown = set(config) - fields

        if len(unknown) > 0:
            raise ConfigError("Unknown keys {} in encoder config.".format(sorted(unknown)))

        return cls(**config)
