from .embedding_set import (
    BALANCE_TOLERANCE,
    EmbeddingSet,
    antipodal_pair,
    f_i,
    h_r,
    log_h_r,
    regular_simplex,
)
from .recoverability import CollisionPair, RecoverabilityReport, check_recoverability
from .recovery import (
    RecoveryResult,
    RecoveryRow,
    project_tangent,
    random_unit_vectors,
    recover_all,
    recover_embedding,
)
from .uniformity import find_uniformity_minimizer, uniformity_objective
from .verification import RecoveryVerificationReport, RowVerdict, verify_prop1

__all__ = [
    "EmbeddingSet",
    "BALANCE_TOLERANCE",
    "log_h_r",
    "h_r",
    "f_i",
    "regular_simplex",
    "antipodal_pair",
    "project_tangent",
    "random_unit_vectors",
    "RecoveryRow",
    "RecoveryResult",
    "recover_embedding",
    "recover_all",
    "RowVerdict",
    "RecoveryVerificationReport",
    "verify_prop1",
    "uniformity_objective",
    "find_uniformity_minimizer",
    "CollisionPair",
    "RecoverabilityReport",
    "check_recoverability",
]
