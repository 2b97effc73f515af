try:
    from .corruptions import ForwardOperator
    from .encoders import EncoderConfig, EncoderModel
    from .losses import LossSpec
    from .numerics import Tensor
except ModuleNotFoundError:
    # to avoid module not found error during installation
    # e.g. numpy is not found in numerics
    pass

try:
    from ._version import __version__
except ModuleNotFoundError:
    __version__ = "0.1.0"

__all__ = [
    "__version__",
    "Tensor",
    "ForwardOperator",
    "EncoderConfig",
    "EncoderModel",
    "LossSpec",
]
