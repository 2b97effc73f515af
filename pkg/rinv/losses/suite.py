from typing import Callable, Dict, List, Tuple

import numpy as np

from ..corruptions import ImageBatch
from ..encoders import EncoderConfig, build_encoder, build_head, embed
from ..errors import DomainError
from ..numerics import RngStream, Tensor, check_gradients, precision
from ..numerics import functional as F
from ..special import unit_rows
from .functional import loss_contrastive, loss_cross_entropy, loss_mse, loss_uniformity
from .spec import LossSpec, variants

__all__ = [
    "gradcheck_suite",
    "gradcheck_tolerance",
    "GRADCHECK_TOLERANCE",
    "ENCODER_GRADCHECK_TOLERANCE",
    "GRADCHECK_STEP",
]

GRADCHECK_TOLERANCE = 1e-5
GRADCHECK_STEP = 1e-5

# cases through a whole encoder, whose relu kinks finite differences may cross
ENCODER_GRADCHECK_TOLERANCE = 1e-4

Case = Tuple[Callable[[], Tensor], List[Tensor]]


def _cases(rng: RngStream) -> Dict[str, Case]:
    cases: Dict[str, Case] = {}

    def leaf(shape, unit: bool = False) -> Tensor:
        data = rng.standard_normal(size=shape)

        if unit:
            data = unit_rows(data)

        return Tensor(data, requires_grad=True)

    a, b = leaf((3, 4)), leaf((4, 5))
    cases["matmul"] = (lambda: F.sum(F.exp(F.scale(F.matmul(a, b), 0.1))), [a, b])

    x, w = leaf((2, 2, 5, 5)), leaf((3, 2, 3, 3))
    cases["conv2d"] = (lambda: F.sum(F.mul(F.conv2d(x, w), F.conv2d(x, w))), [x, w])

    p = leaf((2, 3, 4, 4))
    cases["avg_pool2d"] = (lambda: F.sum(F.exp(F.avg_pool2d(p))), [p])

    r = leaf((4, 6))
    cases["relu"] = (lambda: F.sum(F.mul(F.relu(r), r)), [r])

    n = leaf((5, 3))
    target = Tensor(rng.standard_normal(size=(5, 3)))
    cases["l2_normalize_rows"] = (lambda: F.sum(F.mul(F.l2_normalize_rows(n), target)), [n])

    s = leaf((4, 6))
    mask = ~np.eye(4, 6, dtype=bool)
    cases["log_sum_exp_rows"] = (lambda: F.sum(F.log_sum_exp_rows(s, where=mask)), [s])

    # losses take unit rows, so the normalization is part of the checked graph
    S_raw, R_raw = leaf((6, 4)), leaf((6, 4))

    def unit_pair():
        return F.l2_normalize_rows(S_raw), F.l2_normalize_rows(R_raw)

    cases["loss_mse"] = (lambda: loss_mse(*unit_pair()), [S_raw, R_raw])

    for variant in variants:
        spec = LossSpec(family="contrastive", variant=variant, tau=0.5)

        def uniformity(spec=spec):
            return loss_uniformity(*unit_pair(), spec)

        def contrastive(spec=spec):
            return loss_contrastive(*unit_pair(), spec)

        cases["loss_uniformity/{}".format(variant)] = (uniformity, [S_raw, R_raw])
        cases["loss_contrastive/{}".format(variant)] = (contrastive, [S_raw, R_raw])

    logits = leaf((5, 3))
    labels = np.array([0, 2, 1, 1, 0])
    cases["loss_cross_entropy"] = (lambda: loss_cross_entropy(logits, labels), [logits])

    images = ImageBatch(rng.standard_normal(size=(2, 1, 4, 4)), normalized=True)
    teacher_rows = Tensor(unit_rows(rng.standard_normal(size=(2, 3))))

    for architecture, widths in [("small_conv", (2, 3, 2)), ("mlp", (5,))]:
        config = EncoderConfig(
            architecture=architecture, input_shape=(1, 4, 4), embed_dim=3, widths=widths
        )
        model = build_encoder(config, rng.split(architecture))
        head = build_head(3, 2, rng=rng.split("head"), init="normal")
        spec = LossSpec(tau=0.5)

        def encoder_loss(model=model):
            return loss_contrastive(embed(model, images), teacher_rows, spec)

        def classifier_loss(model=model, head=head):
            return loss_cross_entropy(head(embed(model, images)), np.array([0, 1]))

        cases["encoder/{}".format(architecture)] = (encoder_loss, model.parameters())
        cases["classifier/{}".format(architecture)] = (
            classifier_loss,
            model.parameters() + head.parameters(),
        )

    return cases


def gradcheck_tolerance(name: str) -> float:
    r"""Tolerance of the relative error of case ``name`` in :func:`gradcheck_suite`."""
    if name.startswith(("encoder/", "classifier/")):
        return ENCODER_GRADCHECK_TOLERANCE

    return GRADCHECK_TOLERANCE


def gradcheck_suite(
    seed: int = 0, max_entries: int = 64, n_instances: int = 20
) -> Dict[str, float]:
    r"""Compare analytic and finite-difference gradients of every differentiable piece.

    The suite runs in 64-bit precision with central differences of step
    :data:`GRADCHECK_STEP` on ``n_instances`` independent draws of small random inputs.

    Args:
        seed (int):
            Seed of the inputs. Default: ``0``.
        max_entries (int):
            Largest number of checked entries per tensor. Default: ``64``.
        n_instances (int):
            Number of random instances per case. Default: ``20``.

    Returns:
        Dictionary from case name to the largest relative error over all instances.
        An error passes if it is below :func:`gradcheck_tolerance` of its case.
    """
    if n_instances < 1:
        raise DomainError("n_instances should be positive, but given {}.".format(n_instances))

    rng = RngStream(seed, "gradcheck")
    errors: Dict[str, float] = {}

    with precision("f64"):
        for k in range(n_instances):
            cases = _cases(rng.split("inputs{}".format(k)))

            for name, (fn, tensors) in cases.items():
                error = check_gradients(
                    fn,
                    tensors,
                    h=GRADCHECK_STEP,
                    max_entries=max_entries,
                    rng=rng.split("{}/{}".format(name, k)),
                )
                errors[name] = max(errors.get(name, 0.0), error)

    return errors
