from collections import OrderedDict
from typing import Optional, Sequence

from .report import EvalReport

__all__ = ["plot_reports"]

axes_labels = {"severity": "Severity", "label_fraction": "Fraction of labels"}


def plot_reports(
    reports: Sequence[EvalReport],
    path: str,
    x: str = "severity",
    title: Optional[str] = None,
) -> None:
    r"""Draw one line per (model, metric) against severity or label fraction.

    Standard errors are drawn as error bars when available. Requires ``matplotlib``.

    Args:
        reports (sequence of EvalReport):
            Reports of a sweep.
        path (str):
            Output file. The format follows its extension, e.g. ``.svg``.
        x (str):
            ``"severity"`` or ``"label_fraction"``. Default: ``"severity"``.
        title (str, optional):
            Title of the figure.
    """
    if x not in axes_labels:
        raise NotImplementedError("Not support {}.".format(x))

    import matplotlib

    matplotlib.use("Agg")

    import matplotlib.pyplot as plt

    lines = OrderedDict()

    for report in reports:
        value = getattr(report, x)

        if value is None:
            raise ValueError("Report {} has no {}.".format(report, x))

        lines.setdefault((report.model, report.metric), []).append(report)

    fig, ax = plt.subplots(figsize=(5, 3.5))

    for (model, metric), group in lines.items():
        group = sorted(group, key=lambda report: getattr(report, x))
        xs = [getattr(report, x) for report in group]
        ys = [100 * report.mean for report in group]
        errors = [None if report.stderr is None else 100 * report.stderr for report in group]

        label = "{} ({})".format(model, metric)

        if any(error is None for error in errors):
            ax.plot(xs, ys, marker="o", label=label)
        else:
            ax.errorbar(xs, ys, yerr=errors, marker="o", capsize=3, label=label)

    ax.set_xlabel(axes_labels[x])
    ax.set_ylabel("Accuracy (%)")
    ax.grid(alpha=0.3)
    ax.legend(frameon=False)

    if title is not None:
        ax.set_title(title)

    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
