from . import functional
from ._precision import (
    check_finite,
    get_dtype,
    get_precision,
    is_verification_mode,
    precision,
    set_precision,
)
from .functional import (
    avg_pool2d,
    concat,
    conv2d,
    global_avg_pool,
    l2_normalize_rows,
    log_sum_exp_rows,
    matmul,
    relu,
)
from .gradcheck import check_gradients, numerical_gradient, relative_error
from .optim import Adam, AdamState, adam_step, cosine_lr
from .random import RngStream, rng_draw
from .tensor import Tensor, backward

__all__ = [
    "functional",
    "Tensor",
    "backward",
    "set_precision",
    "get_precision",
    "get_dtype",
    "precision",
    "is_verification_mode",
    "check_finite",
    "matmul",
    "conv2d",
    "relu",
    "avg_pool2d",
    "global_avg_pool",
    "concat",
    "l2_normalize_rows",
    "log_sum_exp_rows",
    "Adam",
    "AdamState",
    "adam_step",
    "cosine_lr",
    "RngStream",
    "rng_draw",
    "numerical_gradient",
    "relative_error",
    "check_gradients",
]
