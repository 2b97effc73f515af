import os
import tempfile

import pytest

from rinv.evaluation import EvalReport, plot_reports

parameters_x = ["severity", "label_fraction"]


def _reports(x: str):
    reports = []

    for model in ["student", "teacher+probe"]:
        for idx, value in enumerate([0.96, 0.98, 0.97]):
            reports.append(
                EvalReport(
                    model=model,
                    operator="mask(p={})".format(value),
                    metric="top1",
                    values=[0.5, 0.6],
                    mean=0.55 - 0.1 * idx,
                    stderr=None if model == "student" else 0.05,
                    n=2,
                    **{x: value}
                )
            )

    return reports


@pytest.mark.parametrize("x", parameters_x)
def test_plot_reports(x: str):
    pytest.importorskip("matplotlib")

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "sweep.png")
        plot_reports(_reports(x), path, x=x, title="sweep")

        assert os.path.getsize(path) > 0


def test_plot_reports_invalid():
    with pytest.raises(NotImplementedError):
        plot_reports(_reports("severity"), "sweep.png", x="seed")

    pytest.importorskip("matplotlib")

    with tempfile.TemporaryDirectory() as temp_dir:
        with pytest.raises(ValueError):
            path = os.path.join(temp_dir, "sweep.png")
            plot_reports(_reports("severity"), path, x="label_fraction")
