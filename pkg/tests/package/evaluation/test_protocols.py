import numpy as np
import pytest
from dummy.models import image_shape, tiny_dataset, tiny_encoder, tiny_head

from rinv.corruptions import ForwardOperator
from rinv.errors import ConfigError, ContractError, DataError, DimensionError
from rinv.evaluation import (
    clean_probe_transfer,
    evaluate,
    evaluate_metrics,
    label_efficiency_sweep,
    label_shift_eval,
    resolve_threads,
    severity_sweep,
    transfer_eval,
)
from rinv.numerics import RngStream
from rinv.training import TrainConfig
from rinv.utils.dataset import synth_shifted_split

parameters_n_threads = [1, 2]
parameters_n_instantiations = [1, 3]

probe_config = TrainConfig(epochs=1, batch_size=4, lr_max=1e-2, augment=False)


@pytest.mark.parametrize("n_instantiations", parameters_n_instantiations)
def test_evaluate_random(n_instantiations: int):
    report = evaluate(
        tiny_encoder(frozen=True),
        tiny_head(),
        tiny_dataset(split="test"),
        ForwardOperator.mask(0.5),
        n_instantiations=n_instantiations,
        rng=RngStream(3, "evaluate"),
        model="student",
    )

    assert report.model == "student"
    assert report.operator == "mask(p=0.5)"
    assert report.metric == "top1"
    assert report.severity == 0.5
    assert report.seed == 3
    assert report.n == n_instantiations
    assert len(report.values) == n_instantiations
    assert all(0 <= value <= 1 for value in report.values)
    assert report.mean == pytest.approx(np.mean(report.values))
    assert report.stderr is not None


def test_evaluate_deterministic():
    report = evaluate(
        tiny_encoder(frozen=True),
        tiny_head(),
        tiny_dataset(split="test"),
        ForwardOperator.blur(3, 1.0),
        n_instantiations=5,
    )

    assert report.n == 1
    assert len(report.values) == 1
    assert report.stderr is None


def test_evaluate_identity():
    report = evaluate(
        tiny_encoder(),
        tiny_head(),
        tiny_dataset(split="test"),
        ForwardOperator.identity(),
        n_instantiations=3,
    )

    assert report.n == 3
    assert len(set(report.values)) == 1
    assert report.stderr == 0


@pytest.mark.parametrize("n_threads", parameters_n_threads)
def test_evaluate_replay(n_threads: int):
    kwargs = dict(n_instantiations=4, batch_size=5)

    encoder, head, dataset = tiny_encoder(frozen=True), tiny_head(), tiny_dataset(split="test")
    operator = ForwardOperator.noise(0.5)

    reference = evaluate(encoder, head, dataset, operator, rng=RngStream(0, "evaluate"), **kwargs)
    report = evaluate(
        encoder,
        head,
        dataset,
        operator,
        rng=RngStream(0, "evaluate"),
        n_threads=n_threads,
        **kwargs
    )

    assert report.values == reference.values


def test_evaluate_metrics():
    reports = evaluate_metrics(
        tiny_encoder(frozen=True),
        tiny_head(),
        tiny_dataset(split="test"),
        ForwardOperator.mask(0.5),
        metric_names=["top1", "top5"],
        n_instantiations=2,
    )

    assert [report.metric for report in reports] == ["top1", "top5"]
    # top-5 of 3 classes covers every class
    assert reports[1].values == [1.0, 1.0]


def test_evaluate_invalid():
    encoder, head, dataset = tiny_encoder(frozen=True), tiny_head(), tiny_dataset(split="test")
    operator = ForwardOperator.mask(0.5)

    with pytest.raises(ConfigError):
        evaluate(encoder, head, dataset, operator, n_instantiations=0)

    with pytest.raises(NotImplementedError):
        evaluate(encoder, head, dataset, operator, metric="f1")

    with pytest.raises(ConfigError):
        evaluate(encoder, head, dataset, operator, metric="auc")

    with pytest.raises(DataError):
        evaluate(encoder, head, dataset.without_labels(), operator)

    with pytest.raises(DimensionError):
        evaluate(encoder, tiny_head(embed_dim=5), dataset, operator)


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("RINV_THREADS", raising=False)

    assert resolve_threads() == 1
    assert resolve_threads(3) == 3

    monkeypatch.setenv("RINV_THREADS", "4")

    assert resolve_threads() == 4

    monkeypatch.setenv("RINV_THREADS", "four")

    with pytest.raises(ConfigError):
        resolve_threads()

    with pytest.raises(ConfigError):
        resolve_threads(0)


def test_severity_sweep():
    encoder, head, dataset = tiny_encoder(frozen=True), tiny_head(), tiny_dataset(split="test")
    operator = ForwardOperator.mask((0.5, 0.95))
    severities = [0.96, 0.98]

    reports = severity_sweep(
        encoder, head, dataset, operator, severities, n_instantiations=2, rng=RngStream(1, "sweep")
    )
    single = evaluate(
        encoder,
        head,
        dataset,
        ForwardOperator.mask(0.96),
        n_instantiations=2,
        rng=RngStream(1, "sweep"),
    )

    assert [report.severity for report in reports] == severities
    assert [report.operator for report in reports] == ["mask(p=0.96)", "mask(p=0.98)"]
    assert reports[0].values == single.values


def test_label_efficiency_sweep():
    fractions = [0.5, 1.0]

    reports = label_efficiency_sweep(
        tiny_encoder(frozen=True),
        tiny_dataset(),
        tiny_dataset(seed=1, split="test"),
        fractions,
        probe_config.replace(operator=ForwardOperator.mask(0.5)),
        n_instantiations=2,
    )

    assert [report.label_fraction for report in reports] == fractions
    assert all(report.n == 2 for report in reports)


def test_label_shift_eval():
    external, label_map = synth_shifted_split(3, 4, *image_shape, RngStream(0, "data"))

    report = label_shift_eval(
        tiny_encoder(frozen=True),
        tiny_head(),
        external,
        label_map,
        ForwardOperator.mask(0.5),
        n_instantiations=2,
    )

    assert report.n == 2
    assert 0 <= report.mean <= 1

    with pytest.raises(DataError):
        label_shift_eval(
            tiny_encoder(frozen=True),
            tiny_head(),
            external.without_labels(),
            label_map,
            ForwardOperator.mask(0.5),
        )


def test_transfer_eval():
    operator = ForwardOperator.mask(0.5)

    binary = transfer_eval(
        tiny_encoder(frozen=True),
        tiny_dataset(n_classes=2),
        tiny_dataset(n_classes=2, seed=1, split="test"),
        operator,
        probe_config,
        n_instantiations=2,
    )
    multiclass = transfer_eval(
        tiny_encoder(frozen=True),
        tiny_dataset(n_classes=5, per_class=4),
        tiny_dataset(n_classes=5, per_class=4, seed=1, split="test"),
        operator,
        probe_config,
        n_instantiations=2,
    )

    assert [report.metric for report in binary] == ["top1", "auc"]
    assert [report.metric for report in multiclass] == ["top1", "top5"]
    assert all(report.operator == "mask(p=0.5)" for report in binary + multiclass)

    with pytest.raises(ContractError):
        transfer_eval(
            tiny_encoder(), tiny_dataset(), tiny_dataset(split="test"), operator, probe_config
        )


def test_clean_probe_transfer():
    teacher = tiny_encoder(frozen=True)
    student = tiny_encoder(seed=1, frozen=True)
    dataset, test_dataset = tiny_dataset(), tiny_dataset(seed=1, split="test")
    operator = ForwardOperator.mask(0.5)

    report = clean_probe_transfer(
        teacher, student, dataset, test_dataset, operator, probe_config, n_instantiations=2
    )
    given = clean_probe_transfer(
        teacher, student, dataset, test_dataset, operator, clean_head=tiny_head(), model="given"
    )

    assert report.model == "student+clean_probe"
    assert report.n == 2
    assert given.model == "given"

    with pytest.raises(ConfigError):
        clean_probe_transfer(teacher, student, dataset, test_dataset, operator)

    with pytest.raises(DimensionError):
        clean_probe_transfer(
            teacher,
            tiny_encoder(embed_dim=5, frozen=True),
            dataset,
            test_dataset,
            operator,
            clean_head=tiny_head(),
        )
