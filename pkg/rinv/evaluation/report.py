import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

__all__ = ["EvalReport", "summarize"]


def summarize(values: Sequence[float], deterministic: bool) -> Tuple[float, Optional[float]]:
    r"""Mean and standard error :math:`s/\sqrt{n}` of per-instantiation values.

    The standard error is ``None`` for deterministic operators and ``0`` for a single value.
    """
    values = np.asarray(values, dtype=np.float64)
    mean = float(np.mean(values))

    if deterministic:
        return mean, None

    if len(values) < 2:
        return mean, 0.0

    return mean, float(np.std(values, ddof=1) / np.sqrt(len(values)))


@dataclass
class EvalReport:
    r"""Metric of one model under one operator.

    Attributes:
        model (str):
            Model id, e.g. ``"student"`` or ``"teacher+probe"``.
        operator (str):
            Description of the forward operator, e.g. ``"mask(p=0.9)"``.
        metric (str):
            ``"top1"``, ``"top5"``, or ``"auc"``.
        values (list of float):
            Metric of every corruption instantiation.
        mean (float):
            Mean of ``values``.
        stderr (float, optional):
            Standard error of ``values``. ``None`` for deterministic operators.
        n (int):
            Number of instantiations.
        seed (int):
            Seed of the evaluation streams.
        severity (float, optional):
            Fixed severity of the operator, if it has one.
        label_fraction (float, optional):
            Fraction of labels used by the probe, for label-efficiency sweeps.
    """

    model: str
    operator: str
    metric: str
    values: List[float] = field(default_factory=list)
    mean: float = 0.0
    stderr: Optional[float] = None
    n: int = 0
    seed: int = 0
    severity: Optional[float] = None
    label_fraction: Optional[float] = None

    def __repr__(self) -> str:
        s = "EvalReport("
        s += "model={}, operator={}, metric={}".format(self.model, self.operator, self.metric)
        s += ", mean={:.4f}".format(self.mean)

        if self.stderr is not None:
            s += ", stderr={:.4f}".format(self.stderr)

        s += ", n={})".format(self.n)

        return s

    def to_row(self) -> Dict[str, Any]:
        r"""One CSV row without the per-instantiation values."""
        row = self.to_dict()
        del row["values"]

        return row

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, report: Dict[str, Any]) -> "EvalReport":
        return cls(**report)
