from ..utils.dataset import LabelShiftMap
from .metrics import roc_auc, topk_accuracy
from .plot import plot_reports
from .protocols import (
    clean_probe_transfer,
    evaluate,
    evaluate_metrics,
    label_efficiency_sweep,
    label_shift_eval,
    resolve_threads,
    severity_sweep,
    supported_metrics,
    transfer_eval,
)
from .report import EvalReport, summarize

__all__ = [
    "EvalReport",
    "LabelShiftMap",
    "summarize",
    "topk_accuracy",
    "roc_auc",
    "supported_metrics",
    "resolve_threads",
    "evaluate",
    "evaluate_metrics",
    "severity_sweep",
    "label_efficiency_sweep",
    "label_shift_eval",
    "transfer_eval",
    "clean_probe_transfer",
    "plot_reports",
]
