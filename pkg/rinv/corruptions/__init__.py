from .batch import ImageBatch
from .functional import apply, apply_blur, apply_mask, apply_noise, gaussian_kernel1d
from .operator import (
    Fixed,
    ForwardOperator,
    Range,
    Severity,
    as_severity,
    sample_operator_instance,
)

__all__ = [
    "ImageBatch",
    "Fixed",
    "Range",
    "Severity",
    "as_severity",
    "ForwardOperator",
    "sample_operator_instance",
    "gaussian_kernel1d",
    "apply_mask",
    "apply_noise",
    "apply_blur",
    "apply",
]
