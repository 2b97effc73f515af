import numpy as np
import pytest

from rinv.evaluation import EvalReport, summarize

parameters_values = [[0.5, 0.75, 0.25], [0.9, 0.9, 0.9, 0.9], [0.1, 0.6]]


@pytest.mark.parametrize("values", parameters_values)
def test_summarize(values):
    mean, stderr = summarize(values, deterministic=False)

    assert mean == pytest.approx(np.mean(values))
    assert stderr == pytest.approx(np.std(values, ddof=1) / np.sqrt(len(values)))

    mean, stderr = summarize(values, deterministic=True)

    assert mean == pytest.approx(np.mean(values))
    assert stderr is None


def test_summarize_single():
    assert summarize([0.3], deterministic=False) == (pytest.approx(0.3), 0.0)


def test_eval_report():
    report = EvalReport(
        model="student",
        operator="mask(p=0.9)",
        metric="top1",
        values=[0.5, 0.7],
        mean=0.6,
        stderr=0.1,
        n=2,
        seed=3,
        severity=0.9,
    )

    assert EvalReport.from_dict(report.to_dict()) == report
    assert "values" not in report.to_row()
    assert report.to_row()["severity"] == 0.9
    assert report.to_row()["label_fraction"] is None
    assert "stderr=0.1000" in repr(report)

    report.stderr = None

    assert "stderr" not in repr(report)
