import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ConfigError, DomainError
from ..numerics import RngStream

__all__ = [
    "Fixed",
    "Range",
    "Severity",
    "ForwardOperator",
    "sample_operator_instance",
    "as_severity",
]

kinds = ["identity", "mask", "noise", "blur", "compose"]


@dataclass(frozen=True)
class Fixed:
    r"""Severity with a single value."""

    value: float

    def draw(self, rng: RngStream, size: int) -> np.ndarray:
        return np.full(size, self.value, dtype=np.float64)

    def to_json(self) -> Any:
        return self.value


@dataclass(frozen=True)
class Range:
    r"""Severity drawn uniformly from ``[lo, hi]`` independently for each image."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise DomainError(
                "Range should satisfy lo <= hi, but given [{}, {}].".format(self.lo, self.hi)
            )

    def draw(self, rng: RngStream, size: int) -> np.ndarray:
        if self.lo == self.hi:
            return np.full(size, self.lo, dtype=np.float64)

        return rng.uniform(self.lo, self.hi, size=size)

    def to_json(self) -> Any:
        return {"range": [self.lo, self.hi]}


Severity = Union[Fixed, Range]


def as_severity(value: Union[Severity, float, Sequence[float], Dict[str, Any]]) -> Severity:
    r"""Build a severity from a number, a ``(lo, hi)`` pair, or a ``{"range": [lo, hi]}`` dict."""
    if isinstance(value, (Fixed, Range)):
        return value

    if isinstance(value, dict):
        if "range" not in value:
            raise ConfigError("Severity dict should have key 'range', but given {}.".format(value))

        value = value["range"]

    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError("Range severity needs two values, but given {}.".format(value))

        return Range(float(value[0]), float(value[1]))

    return Fixed(float(value))


def _bounds(severity: Severity) -> Tuple[float, float]:
    if isinstance(severity, Fixed):
        return severity.value, severity.value

    return severity.lo, severity.hi


@dataclass(frozen=True)
class ForwardOperator:
    r"""Known corruption process :math:`A(\cdot)`.

    Build instances through :meth:`identity`, :meth:`mask`, :meth:`noise`,
    :meth:`blur`, and :meth:`compose`.

    Attributes:
        kind (str):
            ``"identity"``, ``"mask"``, ``"noise"``, ``"blur"``, or ``"compose"``.
        p (Severity, optional):
            Fraction of masked pixels in [0, 1].
        sigma (Severity, optional):
            Standard deviation of additive Gaussian noise.
        n (int, optional):
            Blur kernel size (odd).
        std (Severity, optional):
            Standard deviation of the blur kernel.
        exact (bool):
            Mask exactly ``round(p * height * width)`` pixels per image
            instead of independent Bernoulli draws.
        ops (tuple of ForwardOperator):
            Children of a composition, applied left to right.
    """

    kind: str
    p: Optional[Severity] = None
    sigma: Optional[Severity] = None
    n: Optional[int] = None
    std: Optional[Severity] = None
    exact: bool = False
    ops: Tuple["ForwardOperator", ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.kind not in kinds:
            raise ConfigError("kind should be one of {}, but given {}.".format(kinds, self.kind))

        if self.kind == "mask":
            if self.p is None:
                raise ConfigError("Mask operator needs p.")

            lo, hi = _bounds(self.p)

            if lo < 0 or hi > 1:
                raise DomainError("p should be in [0, 1], but given {}.".format(self.p))
        elif self.kind == "noise":
            if self.sigma is None:
                raise ConfigError("Noise operator needs sigma.")

            lo, _ = _bounds(self.sigma)

            if lo < 0:
                raise DomainError("sigma should be nonnegative, but given {}.".format(self.sigma))
        elif self.kind == "blur":
            if self.n is None or self.std is None:
                raise ConfigError("Blur operator needs n and std.")

            if self.n < 1 or self.n % 2 == 0:
                raise DomainError(
                    "Blur kernel size should be odd positive, but given {}.".format(self.n)
                )

            lo, _ = _bounds(self.std)

            if lo <= 0:
                raise DomainError("Blur std should be positive, but given {}.".format(self.std))

    @classmethod
    def identity(cls) -> "ForwardOperator":
        return cls(kind="identity")

    @classmethod
    def mask(cls, p, exact: bool = False) -> "ForwardOperator":
        return cls(kind="mask", p=as_severity(p), exact=exact)

    @classmethod
    def noise(cls, sigma) -> "ForwardOperator":
        return cls(kind="noise", sigma=as_severity(sigma))

    @classmethod
    def blur(cls, n: int, std) -> "ForwardOperator":
        return cls(kind="blur", n=int(n), std=as_severity(std))

    @classmethod
    def compose(cls, *ops: "ForwardOperator") -> "ForwardOperator":
        return cls(kind="compose", ops=tuple(ops))

    def __str__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        r"""Short description used in reports, e.g. ``mask(p=0.9)``."""

        def fmt(severity: Severity) -> str:
            if isinstance(severity, Fixed):
                return "{:g}".format(severity.value)

            return "[{:g},{:g}]".format(severity.lo, severity.hi)

        if self.kind == "identity":
            return "identity"
        elif self.kind == "mask":
            s = "mask(p={}".format(fmt(self.p))

            if self.exact:
                s += ",exact"

            return s + ")"
        elif self.kind == "noise":
            return "noise(sigma={})".format(fmt(self.sigma))
        elif self.kind == "blur":
            return "blur(n={},std={})".format(self.n, fmt(self.std))
        else:
            return "compose({})".format(",".join(op.describe() for op in self.ops))

    @property
    def is_ranged(self) -> bool:
        if self.kind == "compose":
            return any(op.is_ranged for op in self.ops)

        return any(isinstance(s, Range) for s in (self.p, self.sigma, self.std))

    @property
    def is_random(self) -> bool:
        r"""Whether applying the operator consumes random draws."""
        if self.kind == "compose":
            return any(op.is_random for op in self.ops)

        if self.kind in ["mask", "noise"]:
            return True

        return self.is_ranged

    @property
    def is_deterministic(self) -> bool:
        r"""Whether the operator distorts without any random draw (e.g. a fixed blur).

        The identity is not regarded as deterministic: it does not distort, and
        evaluations run all instantiations on it.
        """
        if self.is_random:
            return False

        if self.kind == "compose":
            return any(op.is_deterministic for op in self.ops)

        return self.kind == "blur"

    @property
    def severity(self) -> Optional[float]:
        r"""Main severity value of a fixed leaf operator, ``None`` otherwise."""
        main = {"mask": self.p, "noise": self.sigma, "blur": self.std}.get(self.kind)

        if isinstance(main, Fixed):
            return main.value

        return None

    def with_severity(self, value) -> "ForwardOperator":
        r"""Copy of a leaf operator whose main severity (p, sigma, or blur std) is ``value``.

        For blur, a ``(n, std)`` pair replaces both kernel size and std.
        """
        if self.kind == "mask":
            return dataclasses.replace(self, p=as_severity(value))
        elif self.kind == "noise":
            return dataclasses.replace(self, sigma=as_severity(value))
        elif self.kind == "blur":
            is_pair = isinstance(value, (list, tuple)) and len(value) == 2

            if is_pair and float(value[0]).is_integer():
                return dataclasses.replace(self, n=int(value[0]), std=as_severity(value[1]))

            return dataclasses.replace(self, std=as_severity(value))

        raise ConfigError("Severity of {} cannot be set.".format(self.describe()))

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "identity":
            return {"kind": "identity"}
        elif self.kind == "mask":
            return {"kind": "mask", "p": self.p.to_json(), "exact": self.exact}
        elif self.kind == "noise":
            return {"kind": "noise", "sigma": self.sigma.to_json()}
        elif self.kind == "blur":
            return {"kind": "blur", "n": self.n, "std": self.std.to_json()}
        else:
            return {"kind": "compose", "ops": [op.to_dict() for op in self.ops]}

    @classmethod
    def from_dict(cls, spec: Dict[str, Any]) -> "ForwardOperator":
        r"""Build an operator from its JSON form.

        Examples:

            .. code-block:: python

                >>> from rinv.corruptions import ForwardOperator
                >>> op = ForwardOperator.from_dict({"kind": "mask", "p": {"range": [0.5, 0.95]}})
                >>> op.describe()
                'mask(p=[0.5,0.95])'
        """
        if "kind" not in spec:
            raise ConfigError("Operator spec should have key 'kind', but given {}.".format(spec))

        kind = spec["kind"]

        if kind == "identity":
            return cls.identity()
        elif kind == "mask":
            return cls.mask(spec["p"], exact=bool(spec.get("exact", False)))
        elif kind == "noise":
            return cls.noise(spec["sigma"])
        elif kind == "blur":
            return cls.blur(spec["n"], spec["std"])
        elif kind == "compose":
            return cls.compose(*[cls.from_dict(op) for op in spec["ops"]])

        raise ConfigError("kind should be one of {}, but given {}.".format(kinds, kind))


def sample_operator_instance(op: ForwardOperator, rng: RngStream) -> ForwardOperator:
    r"""Draw a fixed-severity instance of ``op``.

    Each ranged parameter is drawn uniformly from its range; fixed parameters are kept.

    Args:
        op (ForwardOperator):
            Operator, possibly with ranged severities.
        rng (RngStream):
            Stream providing the draws.

    Returns:
        ForwardOperator whose severities are all :class:`Fixed`.
    """
    if op.kind == "compose":
        return ForwardOperator.compose(
            *[
                sample_operator_instance(child, rng.split(str(idx)))
                for idx, child in enumerate(op.ops)
            ]
        )

    changes = {}

    for name in ["p", "sigma", "std"]:
        severity = getattr(op, name)

        if isinstance(severity, Range):
            changes[name] = Fixed(float(severity.draw(rng, 1)[0]))

    return dataclasses.replace(op, **changes)
