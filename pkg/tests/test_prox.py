import numpy as np
import pytest

from rit3 import (CognitionSpec, prox_l1, prox_l2, prox_lp, prox_nuclear,
                  prox_transform_l1)
from rit3.prox import gst_threshold, regularizer_value

from conftest import random_tensor


# ---------------------------------------------------------------------------
# l1

def test_prox_l1_closed_form():
    v = np.array([[[0.0, 3 + 4j]]])
    out = prox_l1(v, 2.0)
    assert out[0, 0, 0] == 0.0
    assert out[0, 0, 1] == pytest.approx(1.8 + 2.4j, abs=1e-12)


def test_prox_l1_scalar_grid_oracle(rng):
    """prox_l1 minimizes 0.5|x-v|^2 + tau|x|; compare against a 2D grid
    search over the complex plane."""
    for _ in range(10):
        v = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        tau = rng.uniform(0.1, 2.0)
        got = prox_l1(np.full((1, 1, 1), v), tau)[0, 0, 0]
        grid = np.linspace(-4, 4, 401)
        re, im = np.meshgrid(grid, grid, indexing="ij")
        cand = re + 1j * im
        objective = 0.5 * np.abs(cand - v) ** 2 + tau * np.abs(cand)
        best = cand[np.unravel_index(np.argmin(objective), cand.shape)]
        assert abs(got - best) < 2e-2  # grid resolution limited
        own = 0.5 * abs(got - v) ** 2 + tau * abs(got)
        assert own <= objective.min() + 1e-9


def test_prox_l1_continuity_at_zero(rng):
    v = random_tensor(rng, (4, 4, 4))
    out = prox_l1(v, 1e-12)
    assert np.linalg.norm(out - v) < 1e-10 * np.linalg.norm(v)


# ---------------------------------------------------------------------------
# lp (generalized soft thresholding)

def test_prox_lp_zero_below_threshold(rng):
    lam, p = 0.8, 0.5
    tau = gst_threshold(lam, p)
    mags = np.linspace(0, tau * 0.999, 16).reshape(1, 4, 4)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, mags.shape))
    assert np.all(prox_lp(mags * phases, lam, p) == 0)


def test_prox_lp_less_biased_than_l1():
    lam = 1.0
    v = np.full((1, 1, 1), 10.0 + 0j)
    lp_mag = abs(prox_lp(v, lam, 0.5)[0, 0, 0])
    l1_mag = abs(prox_l1(v, lam)[0, 0, 0])
    assert lp_mag <= 10.0
    assert lp_mag > l1_mag


def test_prox_lp_objective_grid_oracle(rng):
    """Returned magnitude beats a dense grid search of the scalar
    objective 0.5(m-|v|)^2 + lam*m^p."""
    for _ in range(10):
        mag = rng.uniform(0.2, 8.0)
        lam = rng.uniform(0.1, 2.0)
        p = rng.uniform(0.2, 0.8)
        m = abs(prox_lp(np.full((1, 1, 1), mag + 0j), lam, p)[0, 0, 0])
        grid = np.linspace(0.0, 2 * mag, 10001)
        obj = 0.5 * (grid - mag) ** 2 + lam * grid**p
        own = 0.5 * (m - mag) ** 2 + lam * m**p
        assert own <= obj.min() + 1e-6


def test_prox_lp_near_threshold_converges():
    """Inputs just above the GST threshold sit in the slow fixed-point
    regime; the Newton polish must still deliver the fixed point."""
    lam, p = 1.0, 0.5
    tau = gst_threshold(lam, p)
    eps = np.array([1e-12, 1e-9, 1e-6, 1e-3])
    v = (tau * (1 + eps)).reshape(1, 2, 2).astype(complex)
    out = np.abs(prox_lp(v, lam, p))
    mags = out.ravel()
    assert np.all(mags > 0)
    resid = np.abs(mags - (np.abs(v).ravel() - lam * p * mags ** (p - 1)))
    assert np.max(resid) < 1e-9


def test_prox_lp_validation():
    with pytest.raises(ValueError):
        prox_lp(np.ones((1, 1, 1)), 1.0, 1.5)
    with pytest.raises(ValueError):
        prox_lp(np.ones((1, 1, 1)), -1.0, 0.5)


# ---------------------------------------------------------------------------
# l2

def test_prox_l2_closed_form():
    v = np.full((1, 1, 1), 2 + 2j)
    assert prox_l2(v, 1.0)[0, 0, 0] == pytest.approx(1 + 1j)


def test_prox_l2_near_identity(rng):
    v = random_tensor(rng, (3, 3, 3))
    out = prox_l2(v, 1e-12)
    assert np.linalg.norm(out - v) < 1e-10 * np.linalg.norm(v)


def test_prox_l2_first_order_condition(rng):
    v = random_tensor(rng, (3, 3, 3))
    w = 0.7
    x = prox_l2(v, w)
    # d/dx [0.5|x-v|^2 + w*0.5|x|^2] = (x - v) + w*x = 0
    assert np.max(np.abs((x - v) + w * x)) < 1e-12


# ---------------------------------------------------------------------------
# nuclear (per-slice SVT)

def test_prox_nuclear_diagonal_closed_form():
    v = np.zeros((3, 3, 1), dtype=complex)
    v[:, :, 0] = np.diag([5.0, 3.0, 1.0])
    out = prox_nuclear(v, 2.0)
    assert np.allclose(np.abs(out[:, :, 0]), np.diag([3.0, 1.0, 0.0]), atol=1e-12)


def test_prox_nuclear_rank1_annihilation(rng):
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    slice_ = np.outer(u, w)
    s = np.linalg.norm(u) * np.linalg.norm(w)
    out = prox_nuclear(slice_[:, :, None], s * 1.001)
    assert np.max(np.abs(out)) < 1e-10 * s


def test_prox_nuclear_local_optimality(rng):
    """Objective at the SVT output beats random perturbations."""
    v = random_tensor(rng, (4, 4, 2))
    tau = 0.8
    out = prox_nuclear(v, tau)

    def objective(x):
        val = 0.5 * np.linalg.norm(x - v) ** 2
        for n in range(x.shape[2]):
            val += tau * np.linalg.svd(x[:, :, n], compute_uv=False).sum()
        return val

    base = objective(out)
    for _ in range(100):
        perturbed = out + 0.05 * random_tensor(rng, out.shape)
        assert objective(perturbed) >= base - 1e-12


# ---------------------------------------------------------------------------
# shared properties

@pytest.mark.parametrize("prox", [
    lambda v: prox_l1(v, 0.7),
    lambda v: prox_l2(v, 0.7),
    lambda v: prox_nuclear(v, 0.7),
])
def test_nonexpansive_convex_proxes(prox, rng):
    for _ in range(5):
        a = random_tensor(rng, (4, 4, 3))
        b = random_tensor(rng, (4, 4, 3))
        assert (np.linalg.norm(prox(a) - prox(b))
                <= np.linalg.norm(a - b) + 1e-12)


@pytest.mark.parametrize("prox", [
    lambda v: prox_l1(v, 0.5),
    lambda v: prox_lp(v, 0.5, 0.5),
    lambda v: prox_l2(v, 0.5),
])
def test_phase_equivariance(prox, rng):
    v = random_tensor(rng, (4, 4, 2))
    phi = np.exp(1j * rng.uniform(0, 2 * np.pi, v.shape))
    lhs = prox(phi * v)
    rhs = phi * prox(v)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(v)))


def test_cognition_spec_validation():
    with pytest.raises(ValueError):
        CognitionSpec(kind="L3", beta=1.0)
    with pytest.raises(ValueError):
        CognitionSpec(kind="L1", beta=-1.0)
    with pytest.raises(ValueError):
        CognitionSpec(kind="Lp", beta=1.0, p=1.5)
    with pytest.raises(ValueError):
        CognitionSpec(kind="TransformL1", beta=1.0)
    spec = CognitionSpec(kind="Lp", beta=0.5, p=0.5)
    assert CognitionSpec.from_json_dict(spec.to_json_dict()) == spec


def test_regularizer_values(rng):
    z = random_tensor(rng, (3, 3, 2))
    assert regularizer_value(CognitionSpec("L1", 1.0), z) == pytest.approx(
        np.sum(np.abs(z)))
    assert regularizer_value(CognitionSpec("L2", 1.0), z) == pytest.approx(
        0.5 * np.linalg.norm(z) ** 2)
    nuc = regularizer_value(CognitionSpec("Nuclear", 1.0), z)
    manual = sum(np.linalg.svd(z[:, :, n], compute_uv=False).sum() for n in range(2))
    assert nuc == pytest.approx(manual)
