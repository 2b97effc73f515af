from .base import EpochTrainerBase
from .config import RunRecord, TrainConfig, desk_batch_size
from .trainers import (
    BaselineTrainer,
    ProbeTrainer,
    StudentTrainer,
    TeacherTrainer,
    train_baseline_e2e,
    train_probe,
    train_student_contrastive,
    train_teacher,
)

__all__ = [
    "EpochTrainerBase",
    "TrainConfig",
    "RunRecord",
    "desk_batch_size",
    "TeacherTrainer",
    "StudentTrainer",
    "ProbeTrainer",
    "BaselineTrainer",
    "train_teacher",
    "train_student_contrastive",
    "train_probe",
    "train_baseline_e2e",
]
