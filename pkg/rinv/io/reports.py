import csv
import io
import json
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

from ._atomic import atomic_open

__all__ = ["REPORT_FIELDS", "to_jsonable", "write_json", "read_json", "write_csv"]

REPORT_FIELDS = [
    "model",
    "operator",
    "severity",
    "label_fraction",
    "metric",
    "mean",
    "stderr",
    "n",
    "seed",
]


def to_jsonable(obj: Any) -> Any:
    r"""Convert numpy scalars and arrays (also nested ones) to plain Python objects."""
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}

    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj]

    if isinstance(obj, np.ndarray):
        return obj.tolist()

    if isinstance(obj, np.generic):
        return obj.item()

    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())

    return obj


def write_json(path: str, obj: Any) -> None:
    with atomic_open(path, mode="w") as f:
        json.dump(to_jsonable(obj), f, indent=2, sort_keys=True)
        f.write("\n")


def read_json(path: str) -> Any:
    with open(path) as f:
        return json.load(f)


def write_csv(
    path: str, rows: Iterable[Dict[str, Any]], fieldnames: Optional[Sequence[str]] = None
) -> None:
    r"""Write rows as CSV.

    Missing values (``None``) are written as empty cells. Floats use ``repr``
    so that repeated runs produce identical files.

    Args:
        path (str):
            Destination. Written atomically.
        rows (iterable of dict):
            Rows keyed by column name.
        fieldnames (sequence of str, optional):
            Columns. :data:`REPORT_FIELDS` by default.
    """
    if fieldnames is None:
        fieldnames = REPORT_FIELDS

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), extrasaction="ignore")
    writer.writeheader()

    for row in rows:
        writer.writerow({key: _format_cell(value) for key, value in to_jsonable(row).items()})

    with atomic_open(path, mode="w") as f:
        f.write(buffer.getvalue())


def _format_cell(value: Any) -> str:
    if value is None:
        return ""

    if isinstance(value, float):
        return repr(value)

    if isinstance(value, list):
        return json.dumps(value)

    return str(value)
