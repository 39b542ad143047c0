import numpy as np
import pytest

from rit3 import (DimensionError, GEOMETRY_PRESETS, GeometryError,
                  RadarGeometry, build_operator_pair, echo_generation, fft3,
                  ifft3, imaging, inner, spectral_projection)

from conftest import random_tensor


def test_pc_dims_and_modulus(op_small):
    g = op_small.geometry
    assert op_small.pc.shape == (g.nx, g.ny, g.nr)
    on = op_small.pc[op_small.support_mask]
    assert np.max(np.abs(np.abs(on) - 1.0)) < 1e-12
    assert np.all(op_small.pc[~op_small.support_mask] == 0)


def test_pc_zero_transverse_wavenumber(op_small):
    """At kx = ky = 0 the filter phase is 2*k*z0 (the scene-center
    reference), times the documented (-1)^q range-centering modulation."""
    g = op_small.geometry
    _, _, k = g.wavenumbers()
    centering = np.where(np.arange(g.nr) % 2 == 0, 1.0, -1.0)
    expected = np.exp(1j * 2.0 * k * g.z0) * centering
    assert np.allclose(op_small.pc[0, 0, :], expected, atol=1e-12)


@pytest.mark.parametrize("key", ["task1"])
def test_support_fraction_brute_force(key):
    """Count propagating grid points 4k^2 >= kx^2 + ky^2 directly."""
    g = GEOMETRY_PRESETS[key]
    op = build_operator_pair(g)
    kx, ky, k = g.wavenumbers()
    count = 0
    for u in range(g.nx):
        for v in range(g.ny):
            for q in range(g.nr):
                if 4 * k[q] ** 2 >= kx[u] ** 2 + ky[v] ** 2:
                    count += 1
    assert op.support_mask.sum() == count
    # Table-1 row 1 at 32x32x64 is fully propagating
    assert count == g.nx * g.ny * g.nr


def test_support_fraction_partial(op_partial):
    g = op_partial.geometry
    kx, ky, k = g.wavenumbers()
    count = sum(1 for u in range(g.nx) for v in range(g.ny) for q in range(g.nr)
                if 4 * k[q] ** 2 >= kx[u] ** 2 + ky[v] ** 2)
    assert op_partial.support_mask.sum() == count
    assert 0 < count < g.nx * g.ny * g.nr


def test_linear_and_zero(op_small, rng):
    g = op_small.geometry
    zero = np.zeros(g.dims, dtype=complex)
    assert np.all(imaging(op_small, zero) == 0)
    assert np.all(echo_generation(op_small, zero) == 0)
    a = random_tensor(rng, g.dims)
    b = random_tensor(rng, g.dims)
    lhs = imaging(op_small, 2.0 * a + 1j * b)
    rhs = 2.0 * imaging(op_small, a) + 1j * imaging(op_small, b)
    assert np.linalg.norm(lhs - rhs) < 1e-12 * np.linalg.norm(lhs)


def test_identity_filter_is_identity(geom_small, rng):
    """With pc replaced by all-ones, imaging is the identity."""
    from rit3.operators import OperatorPair
    op = OperatorPair(geometry=geom_small,
                      pc=np.ones(geom_small.dims, dtype=complex),
                      support_mask=np.ones(geom_small.dims, dtype=bool))
    y = random_tensor(rng, geom_small.dims)
    assert np.linalg.norm(imaging(op, y) - y) < 1e-12 * np.linalg.norm(y)


@pytest.mark.parametrize("fixture", ["op_small", "op_partial"])
def test_adjointness(fixture, rng, request):
    op = request.getfixturevalue(fixture)
    dims = op.geometry.dims
    for _ in range(20):
        x = random_tensor(rng, dims)
        y = random_tensor(rng, dims)
        lhs = inner(imaging(op, y), x)
        rhs = inner(y, echo_generation(op, x))
        assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(y)


def test_bandlimited_roundtrip(op_partial, rng):
    dims = op_partial.geometry.dims
    for _ in range(10):
        x = random_tensor(rng, dims)
        xp = ifft3(fft3(x) * op_partial.support_mask)
        rt = imaging(op_partial, echo_generation(op_partial, xp))
        assert np.linalg.norm(rt - xp) <= 1e-10 * np.linalg.norm(xp)


def test_projection_idempotent(op_partial, rng):
    x = random_tensor(rng, op_partial.geometry.dims)
    once = imaging(op_partial, echo_generation(op_partial, x))
    twice = imaging(op_partial, echo_generation(op_partial, once))
    assert np.linalg.norm(twice - once) <= 1e-10 * np.linalg.norm(once)
    proj = spectral_projection(op_partial, x)
    assert np.linalg.norm(proj - once) <= 1e-10 * np.linalg.norm(once)


def test_operator_roundtrip_peaks_at_scatterer(geom_small):
    """imaging(echo_generation(delta)) peaks at the delta's own voxel."""
    op = build_operator_pair(geom_small)
    x = np.zeros(geom_small.dims, dtype=complex)
    x[8, 8, 16] = 1.0
    img = np.abs(imaging(op, echo_generation(op, x)))
    assert np.unravel_index(np.argmax(img), img.shape) == (8, 8, 16)


def test_dims_mismatch(op_small):
    with pytest.raises(DimensionError):
        imaging(op_small, np.ones((4, 4, 4), dtype=complex))
    with pytest.raises(DimensionError):
        echo_generation(op_small, np.ones((4, 4, 4), dtype=complex))


def test_geometry_validation():
    with pytest.raises(GeometryError):
        RadarGeometry(nx=1, ny=16, nr=16, dx=0.1, dy=0.1, fc=1e9, bw=2e8, z0=5.0)
    with pytest.raises(GeometryError):
        RadarGeometry(nx=8, ny=8, nr=8, dx=0.1, dy=0.1, fc=1e8, bw=3e8, z0=5.0)
    with pytest.raises(GeometryError):
        RadarGeometry(nx=8, ny=8, nr=8, dx=-0.1, dy=0.1, fc=1e9, bw=2e8, z0=5.0)


def test_geometry_presets_match_system_table():
    g1 = GEOMETRY_PRESETS["task1"]
    assert (g1.fc, g1.bw, g1.z0) == (11e9, 2e9, 15.0)
    assert abs(g1.nx * g1.dx - 5.0) < 1e-9
    for key in ("task2", "task3"):
        g = GEOMETRY_PRESETS[key]
        assert (g.fc, g.bw, g.z0) == (79e9, 4e9, 0.6)
        assert abs(g.nx * g.dx - 0.4) < 1e-9
