from .config import EncoderConfig
from .head import LinearHead, build_head, head_logits
from .model import (
    Classifier,
    EncoderModel,
    build_encoder,
    embed,
    parameter_shapes,
    student_from_teacher,
    teacher_from_supervised,
)

__all__ = [
    "EncoderConfig",
    "EncoderModel",
    "Classifier",
    "LinearHead",
    "parameter_shapes",
    "build_encoder",
    "build_head",
    "embed",
    "head_logits",
    "teacher_from_supervised",
    "student_from_teacher",
]
