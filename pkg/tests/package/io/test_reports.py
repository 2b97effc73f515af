import csv
import os
import tempfile

import numpy as np

from rinv.evaluation import EvalReport
from rinv.io import read_json, write_csv, write_json
from rinv.io.reports import REPORT_FIELDS


def _report(severity: float = 0.96) -> EvalReport:
    return EvalReport(
        model="student",
        operator="mask(p={})".format(severity),
        metric="top1",
        values=[0.5, 0.25],
        mean=0.375,
        stderr=0.125,
        n=2,
        seed=0,
        severity=severity,
    )


def test_write_json():
    obj = {
        "report": _report(),
        "array": np.arange(3),
        "scalar": np.float32(0.5),
        1: (np.int64(2), None),
    }

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "results", "report.json")
        write_json(path, obj)
        loaded = read_json(path)

        assert os.listdir(os.path.dirname(path)) == ["report.json"]

    assert loaded["report"]["values"] == [0.5, 0.25]
    assert loaded["array"] == [0, 1, 2]
    assert loaded["scalar"] == 0.5
    assert loaded["1"] == [2, None]


def test_write_csv():
    reports = [_report(0.96), _report(0.98)]

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "sweep.csv")
        write_csv(path, [report.to_row() for report in reports])

        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))

        with open(path) as f:
            content = f.read()

        write_csv(path, [report.to_row() for report in reports])

        with open(path) as f:
            assert f.read() == content

    assert list(rows[0]) == REPORT_FIELDS
    assert [row["severity"] for row in rows] == ["0.96", "0.98"]
    assert rows[0]["label_fraction"] == ""
    assert rows[0]["mean"] == "0.375"
