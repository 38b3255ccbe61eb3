"""The numba kernels and their pure-numpy fallbacks must agree."""

import numpy as np
import pytest

from invariant_guard._backend import HAVE_NUMBA, numba_enabled
from invariant_guard.kernels import euler1d as ke
from invariant_guard.kernels import scalar1d as k1
from invariant_guard.kernels import scalar2d as k2

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def random_euler_ext(rng, n):
    rho = rng.uniform(0.3, 2.5, n)
    v = rng.uniform(-1.5, 1.5, n)
    p = rng.uniform(0.3, 2.5, n)
    u = np.stack([rho, rho * v, p / 0.4 + 0.5 * rho * v**2], axis=1)
    return np.concatenate([u[-2:], u, u[:2]], axis=0)


@pytest.mark.parametrize("n", [8, 33, 128])
def test_scalar1d_backends_agree(n):
    rng = np.random.default_rng(n)
    u = rng.normal(size=n)
    assert np.array_equal(k1._mc_slopes_numpy(u), k1._mc_slopes_numba(u))
    for c in (1.0, -0.7):
        a = k1._muscl_advection_numpy(u, c)
        b = k1._muscl_advection_numba(u, c)
        assert np.array_equal(a, b)
    assert np.array_equal(k1._muscl_burgers_numpy(u), k1._muscl_burgers_numba(u))


@pytest.mark.parametrize("shape", [(8, 8), (16, 12)])
def test_scalar2d_backends_agree(shape):
    rng = np.random.default_rng(shape[0])
    chi = rng.normal(size=shape)
    ux = rng.normal(size=shape)
    uy = rng.normal(size=shape)
    fxa, fya = k2._fluxes_numpy(chi, ux, uy)
    fxb, fyb = k2._fluxes_numba(chi, ux, uy)
    assert np.array_equal(fxa, fxb)
    assert np.array_equal(fya, fyb)


@pytest.mark.parametrize("n", [8, 64])
def test_euler_backends_agree(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        u_ext = random_euler_ext(rng, n)
        fa = ke._fluxes_numpy(u_ext, 1.4)
        fb = ke._fluxes_numba(u_ext, 1.4)
        assert np.allclose(fa, fb, rtol=1e-13, atol=1e-13)


def test_euler_kernel_near_vacuum_falls_back():
    # a state pair engineered to break the reconstruction positivity
    rng = np.random.default_rng(1)
    u_ext = random_euler_ext(rng, 8)
    u_ext[3] = [1e-6, 0.0, 1e-6 / 0.4]  # nearly vacuum cell
    fa = ke._fluxes_numpy(u_ext, 1.4)
    fb = ke._fluxes_numba(u_ext, 1.4)
    assert np.all(np.isfinite(fa)) and np.all(np.isfinite(fb))
    assert np.allclose(fa, fb, rtol=1e-12, atol=1e-12)


def test_env_flag_switches_backend(monkeypatch):
    monkeypatch.setenv("INVARIANT_GUARD_NUMBA", "0")
    assert not numba_enabled()
    monkeypatch.setenv("INVARIANT_GUARD_NUMBA", "1")
    assert numba_enabled()
    monkeypatch.delenv("INVARIANT_GUARD_NUMBA")
    assert numba_enabled() == HAVE_NUMBA


def test_dispatch_uses_fallback(monkeypatch):
    from invariant_guard.kernels import mc_limited_slopes
    rng = np.random.default_rng(2)
    u = rng.normal(size=32)
    monkeypatch.setenv("INVARIANT_GUARD_NUMBA", "0")
    a = mc_limited_slopes(u)
    monkeypatch.setenv("INVARIANT_GUARD_NUMBA", "1")
    b = mc_limited_slopes(u)
    assert np.array_equal(a, b)
