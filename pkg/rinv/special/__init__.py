from .flooring import NORM_FLOOR, row_norms, unit_rows
from .logsumexp import logsumexp
from .softmax import softmax

__all__ = ["NORM_FLOOR", "row_norms", "unit_rows", "logsumexp", "softmax"]
