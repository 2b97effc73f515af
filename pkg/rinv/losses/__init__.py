from .decomposition import GradientDecompositionReport, gradient_decomposition_check
from .functional import (
    loss_contrastive,
    loss_cross_entropy,
    loss_mse,
    loss_uniformity,
    training_loss,
)
from .similarity import (
    SimilarityMatrix,
    UniformityWeights,
    check_unit_rows,
    similarity_matrix,
    uniformity_weights,
)
from .spec import LossSpec
from .suite import (
    ENCODER_GRADCHECK_TOLERANCE,
    GRADCHECK_STEP,
    GRADCHECK_TOLERANCE,
    gradcheck_suite,
    gradcheck_tolerance,
)

__all__ = [
    "LossSpec",
    "SimilarityMatrix",
    "UniformityWeights",
    "check_unit_rows",
    "similarity_matrix",
    "uniformity_weights",
    "loss_mse",
    "loss_uniformity",
    "loss_contrastive",
    "training_loss",
    "loss_cross_entropy",
    "GradientDecompositionReport",
    "gradient_decomposition_check",
    "GRADCHECK_TOLERANCE",
    "ENCODER_GRADCHECK_TOLERANCE",
    "GRADCHECK_STEP",
    "gradcheck_suite",
    "gradcheck_tolerance",
]
