import numpy as np
import pytest

from rinv.corruptions import ForwardOperator
from rinv.encoders import EncoderConfig, teacher_from_supervised
from rinv.evaluation import evaluate, label_efficiency_sweep, severity_sweep
from rinv.losses import LossSpec
from rinv.numerics import RngStream
from rinv.training import TrainConfig, train_probe, train_student_contrastive, train_teacher
from rinv.utils.dataset import synth_dataset

parameters_seed = [0, 1, 2]

n_classes = 10
image_shape = (3, 16, 16)
encoder_config = EncoderConfig(input_shape=image_shape, embed_dim=32, widths=(8, 16, 16))

teacher_config = TrainConfig(epochs=5, batch_size=64, lr_max=1e-3, crop_padding=2)
student_config = TrainConfig(
    epochs=10,
    batch_size=128,
    lr_max=1e-3,
    loss=LossSpec("contrastive", "student_vs_teacher", 0.1),
    operator=ForwardOperator.mask(0.9),
    crop_padding=2,
)
probe_config = TrainConfig(
    epochs=10, batch_size=32, lr_max=1e-3, operator=ForwardOperator.mask(0.9), augment=False
)


def _datasets(seed: int):
    rng = RngStream(seed, "data")
    train = synth_dataset(n_classes, 100, *image_shape, rng, split="train")
    test = synth_dataset(n_classes, 30, *image_shape, rng, split="test")

    return train, test


def _teacher(train, seed: int):
    classifier = train_teacher(train, teacher_config.replace(seed=seed), encoder_config)

    return teacher_from_supervised(classifier)


def _student(teacher, train, config: TrainConfig, seed: int):
    student = train_student_contrastive(teacher, train, config.replace(seed=seed))

    return student.copy(frozen=True)


def _probe_accuracy(encoder, train, test, operator: ForwardOperator, seed: int) -> float:
    config = probe_config.replace(operator=operator, seed=seed)
    head = train_probe(encoder, train, config)
    report = evaluate(
        encoder, head, test, operator, n_instantiations=3, rng=RngStream(seed, "eval")
    )

    return report.mean


def _count_inversions(values) -> int:
    # accuracy increasing with severity
    return int(np.sum(np.diff(values) > 0))


@pytest.mark.skipif("not pytest.run_slow")
def test_student_trends():
    robust, raw, mse, fractions_full, fractions_low = [], [], [], [], []

    for seed in parameters_seed:
        train, test = _datasets(seed)
        teacher = _teacher(train, seed)
        student = _student(teacher, train, student_config, seed)
        mse_student = _student(
            teacher, train, student_config.replace(loss=LossSpec(family="mse")), seed
        )
        operator = student_config.operator

        robust.append(_probe_accuracy(student, train, test, operator, seed))
        raw.append(_probe_accuracy(teacher, train, test, operator, seed))
        mse.append(_probe_accuracy(mse_student, train, test, operator, seed))

        reports = label_efficiency_sweep(
            student,
            train,
            test,
            [0.05, 1.0],
            probe_config.replace(seed=seed),
            n_instantiations=3,
            rng=RngStream(seed, "eval"),
        )
        fractions_low.append(reports[0].mean)
        fractions_full.append(reports[1].mean)

    assert np.mean(robust) >= np.mean(raw) + 0.05
    assert np.mean(robust) >= np.mean(mse) - 0.01
    assert np.mean(fractions_full) >= np.mean(fractions_low) - 0.01


@pytest.mark.skipif("not pytest.run_slow")
def test_severity_trend():
    seed = 0
    train, test = _datasets(seed)
    teacher = _teacher(train, seed)
    config = student_config.replace(operator=ForwardOperator.mask((0.5, 0.95)))
    student = _student(teacher, train, config, seed)
    head = train_probe(student, train, probe_config.replace(operator=config.operator, seed=seed))

    reports = severity_sweep(
        student,
        head,
        test,
        config.operator,
        [0.96, 0.97, 0.98, 0.99],
        n_instantiations=3,
        rng=RngStream(seed, "eval"),
    )
    accuracies = [report.mean for report in reports]

    assert _count_inversions(accuracies) <= 1
    assert np.all(np.diff(accuracies) <= 0.01)
    assert accuracies[1] > 1 / n_classes
