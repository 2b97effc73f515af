import dataclasses
from dataclasses import dataclass
from typing import Any, Dict

from ..errors import ConfigError, DomainError

__all__ = ["LossSpec", "families", "variants"]

families = ["mse", "contrastive"]
variants = ["student_vs_teacher", "student_vs_student", "student_vs_both", "nt_xent"]


@dataclass(frozen=True)
class LossSpec:
    r"""Selector of the training objective.

    Attributes:
        family (str):
            ``"mse"`` (alignment only) or ``"contrastive"``
            (alignment scaled by :math:`1/\tau` plus a uniformity term).
        variant (str):
            Uniformity variant: ``"student_vs_teacher"``, ``"student_vs_student"``,
            ``"student_vs_both"``, or ``"nt_xent"``. Ignored when ``family="mse"``.
        tau (float):
            Temperature :math:`\tau>0`. Default: ``0.1``.
    """

    family: str = "contrastive"
    variant: str = "student_vs_teacher"
    tau: float = 0.1

    def __post_init__(self) -> None:
        if self.family not in families:
            raise ConfigError(
                "family should be one of {}, but given {}.".format(families, self.family)
            )

        if self.variant not in variants:
            raise ConfigError(
                "variant should be one of {}, but given {}.".format(variants, self.variant)
            )

        if not self.tau > 0:
            raise DomainError("tau should be positive, but given {}.".format(self.tau))

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, spec: Dict[str, Any]) -> "LossSpec":
        unknown = set(spec) - {"family", "variant", "tau"}

        if len(unknown) > 0:
            raise ConfigError("Unknown keys {} in loss spec.".format(sorted(unknown)))

        return cls(**spec)
