import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..errors import ConfigError, ContractError, DimensionError, NumericError
from ._precision import is_verification_mode
from .tensor import Tensor

__all__ = ["AdamState", "adam_step", "Adam", "cosine_lr"]

weight_decay_modes = ["decoupled", "coupled"]


@dataclass
class AdamState:
    r"""Moments and hyperparameters of Adam.

    ``m`` and ``v`` hold one array per parameter and are created lazily at the first step.
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.0
    weight_decay_mode: str = "decoupled"
    t: int = 0
    m: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise ConfigError("lr should be positive, but given {}.".format(self.lr))

        if self.weight_decay < 0:
            raise ConfigError(
                "weight_decay should be nonnegative, but given {}.".format(self.weight_decay)
            )

        if self.weight_decay_mode not in weight_decay_modes:
            raise ConfigError(
                "weight_decay_mode should be one of {}, but given {}.".format(
                    weight_decay_modes, self.weight_decay_mode
                )
            )


def adam_step(
    params: Sequence[np.ndarray], grads: Sequence[np.ndarray], state: AdamState
) -> None:
    r"""Update ``params`` in place by one Adam step with bias correction.

    .. math::
        \boldsymbol{m}_{t}
        &= \beta_{1}\boldsymbol{m}_{t-1} + (1 - \beta_{1})\boldsymbol{g}_{t}, \\
        \boldsymbol{v}_{t}
        &= \beta_{2}\boldsymbol{v}_{t-1} + (1 - \beta_{2})\boldsymbol{g}_{t}^{2}, \\
        \boldsymbol{\theta}_{t}
        &= \boldsymbol{\theta}_{t-1}
        - \eta\frac{\hat{\boldsymbol{m}}_{t}}{\sqrt{\hat{\boldsymbol{v}}_{t}} + \epsilon}
        - \eta\lambda\boldsymbol{\theta}_{t-1}.

    With ``weight_decay_mode="coupled"``, :math:`\lambda\boldsymbol{\theta}_{t-1}`
    is added to the gradient instead.

    Args:
        params (sequence of numpy.ndarray):
            Parameters updated in place.
        grads (sequence of numpy.ndarray):
            Gradients with the same shapes as ``params``.
        state (AdamState):
            Optimizer state. ``state.t`` is incremented by one.
    """
    if len(params) != len(grads):
        raise DimensionError(
            "{} parameters are given with {} gradients.".format(len(params), len(grads))
        )

    if len(state.m) == 0:
        state.m = [np.zeros_like(param) for param in params]
        state.v = [np.zeros_like(param) for param in params]

    if len(state.m) != len(params):
        raise ContractError("AdamState was created for a different parameter list.")

    for idx, (param, grad) in enumerate(zip(params, grads)):
        if param.shape != grad.shape or state.m[idx].shape != param.shape:
            raise DimensionError(
                "Shape of parameter {} and gradient {} do not agree.".format(
                    param.shape, grad.shape
                )
            )

        if is_verification_mode() and not np.all(np.isfinite(grad)):
            raise NumericError("Non-finite gradient is detected at parameter {}.".format(idx))

    state.t += 1
    t = state.t
    lr, beta1, beta2 = state.lr, state.beta1, state.beta2
    bias_correction1 = 1 - beta1**t
    bias_correction2 = 1 - beta2**t

    for param, grad, m, v in zip(params, grads, state.m, state.v):
        if state.weight_decay_mode == "coupled" and state.weight_decay > 0:
            grad = grad + state.weight_decay * param

        m *= beta1
        m += (1 - beta1) * grad
        v *= beta2
        v += (1 - beta2) * grad**2

        m_hat = m / bias_correction1
        v_hat = v / bias_correction2
        update = lr * m_hat / (np.sqrt(v_hat) + state.epsilon)

        if state.weight_decay_mode == "decoupled" and state.weight_decay > 0:
            update = update + lr * state.weight_decay * param

        param -= update.astype(param.dtype, copy=False)


class Adam:
    r"""Adam optimizer over tensors with ``requires_grad=True``.

    Args:
        params (sequence of Tensor):
            Trainable tensors.
        lr (float):
            Learning rate. Default: ``1e-3``.
        betas (tuple of float):
            Coefficients of the moment estimates. Default: ``(0.9, 0.999)``.
        eps (float):
            Stabilizer of the denominator. Default: ``1e-8``.
        weight_decay (float):
            Weight decay coefficient. Default: ``0``.
        weight_decay_mode (str):
            ``"decoupled"`` or ``"coupled"``. Default: ``"decoupled"``.
    """

    def __init__(
        self,
        params: Sequence[Tensor],
        lr: float = 1e-3,
        betas: Sequence[float] = (0.9, 0.999),
        eps: float = 1e-8,
        weight_decay: float = 0.0,
        weight_decay_mode: str = "decoupled",
    ) -> None:
        params = list(params)

        for param in params:
            if not param.requires_grad:
                raise ContractError("Frozen tensors cannot be optimized.")

        self.params = params
        self.state = AdamState(
            lr=lr,
            beta1=betas[0],
            beta2=betas[1],
            epsilon=eps,
            weight_decay=weight_decay,
            weight_decay_mode=weight_decay_mode,
        )

    def __repr__(self) -> str:
        s = "Adam("
        s += "lr={lr}"
        s += ", weight_decay={weight_decay}"
        s += ", weight_decay_mode={weight_decay_mode}"
        s += ")"

        return s.format(**self.state.__dict__)

    @property
    def lr(self) -> float:
        return self.state.lr

    @lr.setter
    def lr(self, value: float) -> None:
        self.state.lr = value

    def zero_grad(self) -> None:
        for param in self.params:
            param.zero_grad()

    def step(self, lr: Optional[float] = None) -> None:
        r"""Apply one update using the gradients stored in the parameters.

        Args:
            lr (float, optional):
                Learning rate of this step, e.g. from :func:`cosine_lr`.
                A zero learning rate leaves the parameters untouched but advances ``t``.
        """
        if lr is not None:
            if lr < 0:
                raise ConfigError("lr should be nonnegative, but given {}.".format(lr))

            self.state.lr = lr

        adam_step(
            [param.data for param in self.params],
            [param.grad for param in self.params],
            self.state,
        )


def cosine_lr(step: int, total_steps: int, lr_max: float) -> float:
    r"""Cosine learning-rate schedule without warmup.

    .. math::
        \eta(s) = \frac{\eta_{\max}}{2}\left(1 + \cos\frac{\pi s}{S}\right)

    Args:
        step (int):
            Current step :math:`s` with :math:`0\leq s\leq S`.
        total_steps (int):
            Total number of steps :math:`S\geq 1`.
        lr_max (float):
            Peak learning rate.

    Returns:
        Learning rate at ``step``.
    """
    if total_steps < 1:
        raise ContractError("total_steps should be positive, but given {}.".format(total_steps))

    if step < 0 or step > total_steps:
        raise ContractError(
            "step should be in [0, {}], but given {}.".format(total_steps, step)
        )

    return lr_max * 0.5 * (1 + math.cos(math.pi * step / total_steps))
