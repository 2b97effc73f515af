import numpy as np
import pytest
from dummy.callback import EpochRecorder
from dummy.models import tiny_dataset, tiny_encoder, tiny_encoder_config

from rinv.corruptions import ForwardOperator
from rinv.encoders import Classifier, LinearHead, teacher_from_supervised
from rinv.errors import ConfigError, ContractError, DataError
from rinv.losses import LossSpec
from rinv.training import (
    BaselineTrainer,
    ProbeTrainer,
    StudentTrainer,
    TeacherTrainer,
    TrainConfig,
    train_baseline_e2e,
    train_probe,
    train_student_contrastive,
    train_teacher,
)
from rinv.training.trainers import final_lr_fraction

parameters_loss = [
    LossSpec(family="mse"),
    LossSpec(variant="student_vs_teacher", tau=0.1),
    LossSpec(variant="nt_xent", tau=0.5),
]
parameters_precision = ["f32", "f64"]

teacher_config = TrainConfig(epochs=2, batch_size=8, lr_max=1e-2, crop_padding=1)
student_config = TrainConfig(
    epochs=2, batch_size=8, lr_max=1e-2, operator=ForwardOperator.mask(0.5), crop_padding=1
)
probe_config = TrainConfig(
    epochs=2, batch_size=4, lr_max=1e-2, operator=ForwardOperator.mask(0.5), augment=False
)


def _state(model):
    return {name: param.data.copy() for name, param in model.params.items()}


def _teacher(seed: int = 0):
    config = teacher_config.replace(seed=seed)
    classifier = train_teacher(tiny_dataset(), config, tiny_encoder_config())

    return classifier, teacher_from_supervised(classifier)


@pytest.mark.parametrize("precision", parameters_precision)
def test_train_teacher(precision: str):
    dataset = tiny_dataset()
    recorder = EpochRecorder()
    trainer = TeacherTrainer(teacher_config.replace(precision=precision), callbacks=recorder)

    classifier = trainer(dataset, tiny_encoder_config())
    record = trainer.run_record(checkpoint="teacher.rinv")

    assert isinstance(classifier, Classifier)
    assert classifier.head.n_classes == dataset.class_count
    assert recorder.epochs == [0, 1, 2]
    assert len(record.epoch_losses) == 2
    assert len(record.lr_history) == 2 * 3
    assert record.lr_history[0] == teacher_config.lr_max
    assert record.n_examples == len(dataset)
    assert "teacher/shuffle" in record.streams
    assert "teacher/augment" in record.streams
    assert "teacher/init" in record.streams
    assert classifier.encoder.dtype == {"f32": np.float32, "f64": np.float64}[precision]


def test_train_teacher_schedule():
    trainer = TeacherTrainer(teacher_config)
    trainer(tiny_dataset(), tiny_encoder_config())

    lr_history = np.array(trainer.lr_history)
    lr_max = teacher_config.lr_max

    assert lr_history[0] == lr_max
    assert np.all(np.diff(lr_history) < 0)

    # the last batch is still applied
    assert lr_history[-1] == pytest.approx(final_lr_fraction * lr_max)
    assert 0 < lr_history[-1] < 1e-3 * lr_max


def test_train_teacher_replay():
    a, _ = _teacher(seed=0)
    b, _ = _teacher(seed=0)
    c, _ = _teacher(seed=1)

    state_a, state_b, state_c = _state(a.encoder), _state(b.encoder), _state(c.encoder)

    assert all(np.array_equal(state_a[name], state_b[name]) for name in state_a)
    assert not all(np.array_equal(state_a[name], state_c[name]) for name in state_a)


def test_train_teacher_invalid():
    dataset = tiny_dataset()

    with pytest.raises(DataError):
        train_teacher(dataset.without_labels(), teacher_config, tiny_encoder_config())

    with pytest.raises(ConfigError):
        config = teacher_config.replace(operator=ForwardOperator.mask(0.5))
        train_teacher(dataset, config, tiny_encoder_config())


@pytest.mark.parametrize("loss", parameters_loss)
def test_train_student(loss: LossSpec):
    _, teacher = _teacher()
    teacher_state = _state(teacher)
    trainer = StudentTrainer(student_config.replace(loss=loss))

    student = trainer(teacher, tiny_dataset())
    record = trainer.run_record()

    assert not student.frozen
    assert teacher.frozen
    assert all(
        np.array_equal(teacher_state[name], teacher.params[name].data) for name in teacher_state
    )
    assert not all(
        np.allclose(teacher_state[name], student.params[name].data) for name in teacher_state
    )
    assert "student/corruption" in record.streams
    assert all(np.isfinite(record.epoch_losses))


def test_train_student_shared_streams():
    # runs differing only in the loss draw the same batches and corruptions
    _, teacher = _teacher()
    records = []

    for loss in parameters_loss:
        trainer = StudentTrainer(student_config.replace(loss=loss))
        trainer(teacher, tiny_dataset())
        records.append(trainer.run_record())

    assert all(record.streams == records[0].streams for record in records)
    assert all(len(record.lr_history) == len(records[0].lr_history) for record in records)


def test_train_student_trailing_batch():
    _, teacher = _teacher()
    dataset = tiny_dataset().subset(np.arange(17))
    trainer = StudentTrainer(student_config.replace(epochs=1))

    trainer(teacher, dataset)

    # the trailing single image is dropped for the contrastive loss
    assert len(trainer.lr_history) == 2


def test_train_student_unfrozen_teacher():
    classifier, _ = _teacher()

    with pytest.raises(ContractError):
        train_student_contrastive(classifier.encoder, tiny_dataset(), student_config)


def test_train_student_initial_student():
    _, teacher = _teacher()
    init = tiny_encoder(seed=5)
    init_state = _state(init)

    student = train_student_contrastive(teacher, tiny_dataset(), student_config, student=init)

    assert student is not init
    assert all(np.array_equal(init_state[name], init.params[name].data) for name in init_state)


@pytest.mark.parametrize("label_fraction", [1.0, 0.5])
def test_train_probe(label_fraction: float):
    _, teacher = _teacher()
    dataset = tiny_dataset()
    trainer = ProbeTrainer(probe_config.replace(label_fraction=label_fraction))

    head = trainer(teacher, dataset)
    record = trainer.run_record()

    assert isinstance(head, LinearHead)
    assert head.n_classes == dataset.class_count
    assert record.n_examples == int(round(label_fraction * 8)) * 3
    assert "probe/labels" in record.streams
    assert np.any(head.weight.data != 0)


def test_train_probe_without_weight_decay(caplog: pytest.LogCaptureFixture):
    _, teacher = _teacher()
    heads = []

    for weight_decay in [0.0, 0.5]:
        trainer = ProbeTrainer(probe_config.replace(weight_decay=weight_decay))
        heads.append(trainer(teacher, tiny_dataset()))

        assert trainer.optimizer.state.weight_decay == 0

    assert np.array_equal(heads[0].weight.data, heads[1].weight.data)
    assert np.array_equal(heads[0].bias.data, heads[1].bias.data)
    assert "weight_decay=0.5 is ignored" in caplog.text

    trainer = TeacherTrainer(teacher_config.replace(weight_decay=0.5))
    trainer(tiny_dataset(), tiny_encoder_config())

    assert trainer.optimizer.state.weight_decay == 0.5


def test_train_probe_invalid():
    classifier, teacher = _teacher()

    with pytest.raises(ContractError):
        train_probe(classifier.encoder, tiny_dataset(), probe_config)

    with pytest.raises(DataError):
        train_probe(teacher, tiny_dataset(), probe_config.replace(batch_size=32))

    with pytest.raises(DataError):
        train_probe(teacher, tiny_dataset().without_labels(), probe_config)


def test_train_baseline_e2e():
    classifier, _ = _teacher()
    init_state = _state(classifier.encoder)
    trainer = BaselineTrainer(student_config.replace(loss=LossSpec(family="mse")))

    baseline = trainer(classifier, tiny_dataset())

    assert not baseline.encoder.frozen
    assert all(
        np.array_equal(init_state[name], classifier.encoder.params[name].data)
        for name in init_state
    )
    assert not all(
        np.allclose(init_state[name], baseline.encoder.params[name].data) for name in init_state
    )

    with pytest.raises(DataError):
        train_baseline_e2e(classifier, tiny_dataset().without_labels(), student_config)
