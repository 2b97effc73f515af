import numpy as np
import pytest
import scipy.special

from rinv.errors import BatchSizeError, ContractError, DataError, DimensionError
from rinv.losses import (
    LossSpec,
    loss_contrastive,
    loss_cross_entropy,
    loss_mse,
    loss_uniformity,
    training_loss,
)
from rinv.losses.spec import variants
from rinv.numerics import Tensor, precision
from rinv.special import unit_rows

parameters_variant = variants
parameters_tau = [0.05, 0.1, 1.0]
parameters_n_samples = [2, 7]


def _pair(n_samples: int, dim: int = 5, seed: int = 0):
    rng = np.random.default_rng(seed)
    S = unit_rows(rng.standard_normal((n_samples, dim)))
    R = unit_rows(rng.standard_normal((n_samples, dim)))

    return S, R


def _uniformity_oracle(S: np.ndarray, R: np.ndarray, variant: str, tau: float) -> float:
    off_diagonal = ~np.eye(len(S), dtype=bool)
    SS, SR, RR = S @ S.T / tau, S @ R.T / tau, R @ R.T / tau

    if variant == "student_vs_teacher":
        terms = scipy.special.logsumexp(SR, axis=1)
    elif variant == "student_vs_student":
        terms = scipy.special.logsumexp(np.where(off_diagonal, SS, -np.inf), axis=1)
    else:
        both = np.concatenate([np.where(off_diagonal, SS, -np.inf), SR], axis=1)
        terms = scipy.special.logsumexp(both, axis=1)

        if variant == "nt_xent":
            anchored = np.concatenate([SR.T, np.where(off_diagonal, RR, -np.inf)], axis=1)
            terms = terms + scipy.special.logsumexp(anchored, axis=1)

    return float(np.mean(terms))


@pytest.mark.parametrize("n_samples", parameters_n_samples)
def test_loss_mse(n_samples: int):
    S, R = _pair(n_samples)

    with precision("f64"):
        loss = loss_mse(Tensor(S), Tensor(R))
        per_sample = loss_mse(Tensor(S), Tensor(R), per_sample=True)

    assert np.isclose(loss.item(), -np.mean(np.sum(S * R, axis=1)))
    assert per_sample.shape == (n_samples,)

    # equals the squared distance up to constants
    assert np.isclose(2 + 2 * loss.item(), np.mean(np.sum((S - R) ** 2, axis=1)))


@pytest.mark.parametrize("variant", parameters_variant)
@pytest.mark.parametrize("tau", parameters_tau)
@pytest.mark.parametrize("n_samples", parameters_n_samples)
def test_loss_uniformity(variant: str, tau: float, n_samples: int):
    S, R = _pair(n_samples)
    spec = LossSpec(variant=variant, tau=tau)

    with precision("f64"):
        loss = loss_uniformity(Tensor(S), Tensor(R), spec)
        contrastive = loss_contrastive(Tensor(S), Tensor(R), spec)

    expected = _uniformity_oracle(S, R, variant, tau)
    alignment = -np.mean(np.sum(S * R, axis=1)) / tau

    assert np.isclose(loss.item(), expected)
    assert np.isclose(contrastive.item(), alignment + expected)


@pytest.mark.parametrize("tau", parameters_tau)
def test_contrastive_is_cross_entropy(tau: float):
    S, R = _pair(6)
    K = S @ R.T / tau

    with precision("f64"):
        loss = loss_contrastive(Tensor(S), Tensor(R), LossSpec(tau=tau))

    expected = -np.mean(np.diag(scipy.special.log_softmax(K, axis=1)))

    assert np.isclose(loss.item(), expected)


def test_loss_contrastive_example():
    E = Tensor(np.eye(2))

    loss = loss_contrastive(E, E, LossSpec(tau=1.0))

    assert np.isclose(loss.item(), -1 + np.log(np.e + 1))


def test_training_loss():
    S, R = _pair(4)

    mse = training_loss(Tensor(S), Tensor(R), LossSpec(family="mse"))
    contrastive = training_loss(Tensor(S), Tensor(R), LossSpec(tau=0.5))

    assert np.isclose(mse.item(), loss_mse(Tensor(S), Tensor(R)).item())
    assert np.isclose(
        contrastive.item(), loss_contrastive(Tensor(S), Tensor(R), LossSpec(tau=0.5)).item()
    )


@pytest.mark.parametrize("variant", ["student_vs_student", "student_vs_both", "nt_xent"])
def test_loss_uniformity_single_sample(variant: str):
    S, R = _pair(1)

    with pytest.raises(BatchSizeError):
        loss_uniformity(Tensor(S), Tensor(R), LossSpec(variant=variant))


def test_loss_single_sample_student_vs_teacher():
    S, R = _pair(1)

    with precision("f64"):
        loss = loss_contrastive(Tensor(S), Tensor(R), LossSpec(tau=0.1))

    # a single positive has probability one
    assert np.isclose(loss.item(), 0)


def test_loss_non_unit():
    S, R = _pair(3)

    with pytest.raises(ContractError):
        loss_mse(Tensor(2 * S), Tensor(R))

    with pytest.raises(DimensionError):
        loss_mse(Tensor(S), Tensor(R[:2]))


def test_loss_cross_entropy():
    rng = np.random.default_rng(0)
    logits = 5 * rng.standard_normal((6, 4))
    labels = np.array([0, 1, 2, 3, 0, 1])

    with precision("f64"):
        loss = loss_cross_entropy(Tensor(logits), labels)

    expected = -np.mean(scipy.special.log_softmax(logits, axis=1)[np.arange(6), labels])

    assert np.isclose(loss.item(), expected)

    with pytest.raises(DataError):
        loss_cross_entropy(Tensor(logits), np.array([0, 1, 2, 4, 0, 1]))


@pytest.mark.parametrize("variant", parameters_variant)
@pytest.mark.parametrize("tau", parameters_tau)
@pytest.mark.parametrize("n_samples", [2, 8, 64])
@pytest.mark.parametrize("dim", [4, 64])
def test_contrastive_decomposition(variant: str, tau: float, n_samples: int, dim: int):
    S, R = _pair(n_samples, dim=dim, seed=n_samples + dim)
    spec = LossSpec(variant=variant, tau=tau)

    with precision("f64"):
        contrastive = loss_contrastive(Tensor(S), Tensor(R), spec).item()
        mse = loss_mse(Tensor(S), Tensor(R)).item()
        uniformity = loss_uniformity(Tensor(S), Tensor(R), spec).item()

    assert abs(contrastive - mse / tau - uniformity) < 1e-10


@pytest.mark.parametrize("variant", parameters_variant)
@pytest.mark.parametrize("n_samples", [2, 7])
def test_loss_row_permutation(variant: str, n_samples: int):
    S, R = _pair(n_samples, seed=3)
    perm = np.random.default_rng(n_samples).permutation(n_samples)
    spec = LossSpec(variant=variant, tau=0.1)

    with precision("f64"):
        for loss_fn in [loss_uniformity, loss_contrastive]:
            loss = loss_fn(Tensor(S), Tensor(R), spec).item()
            permuted = loss_fn(Tensor(S[perm]), Tensor(R[perm]), spec).item()

            assert np.isclose(loss, permuted, rtol=0, atol=1e-10)

        loss = loss_mse(Tensor(S), Tensor(R)).item()
        permuted = loss_mse(Tensor(S[perm]), Tensor(R[perm])).item()

    assert np.isclose(loss, permuted, rtol=0, atol=1e-10)


@pytest.mark.parametrize("tau", parameters_tau)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_loss_contrastive_lower_bound(tau: float, seed: int):
    S, R = _pair(8, seed=seed)
    spec = LossSpec(tau=tau)

    with precision("f64"):
        losses = [
            loss_contrastive(Tensor(S), Tensor(R), spec).item(),
            loss_contrastive(Tensor(S), Tensor(S), spec).item(),
        ]

    assert min(losses) >= -1 / tau


@pytest.mark.parametrize("tau", parameters_tau)
@pytest.mark.parametrize("angle", [0.0, 1.0, 2.0, np.pi])
def test_loss_uniformity_shift(tau: float, angle: float):
    # an extra pair of coordinates adds alpha ** 2 * cos(angle) to every entry of K,
    # the orthogonal choice angle = pi / 2 adds nothing
    n_samples, dim = 6, 5
    S, R = _pair(n_samples, dim=dim, seed=4)
    alpha = 0.6
    scale = np.sqrt(1 - alpha**2)

    def lift(R: np.ndarray, angle: float) -> np.ndarray:
        extra = np.tile([alpha * np.cos(angle), alpha * np.sin(angle)], (n_samples, 1))

        return np.concatenate([scale * R, extra], axis=1)

    S_lifted = lift(S, 0.0)
    spec = LossSpec(variant="student_vs_teacher", tau=tau)

    with precision("f64"):
        base = loss_uniformity(Tensor(S_lifted), Tensor(lift(R, np.pi / 2)), spec).item()
        shifted = loss_uniformity(Tensor(S_lifted), Tensor(lift(R, angle)), spec).item()

    c = alpha**2 * np.cos(angle)

    assert abs(shifted - (base + c / tau)) < 1e-10
