import numpy as np
import pytest

from invariant_guard.core import (DgField, EulerState1D, FvField1D,
                                  SpectralField, UniformGrid1D, UniformGrid2D,
                                  bracket, coarse_grain, coarse_grain_2d,
                                  volume_mean, FvField2D)


def test_bracket_hand_cases():
    assert bracket([1, 1], [1, 1], [0.5, 0.5]) == 1.0
    assert bracket([1, -1], [1, 1], [0.5, 0.5]) == 0.0
    # 2*4*0.1 + 3*5*0.2 = 0.8 + 3.0
    assert bracket([2, 3], [4, 5], [0.1, 0.2]) == pytest.approx(3.8, rel=1e-14)


def test_bracket_shape_mismatch():
    with pytest.raises(ValueError):
        bracket([1, 2], [1, 2, 3], [1, 1])


def test_bracket_bilinear_symmetric_positive():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = rng.integers(2, 40)
        a, b, c = rng.normal(size=(3, n))
        vol = rng.uniform(0.1, 2.0, size=n)
        al, be = rng.normal(size=2)
        lhs = bracket(al * a + be * b, c, vol)
        rhs = al * bracket(a, c, vol) + be * bracket(b, c, vol)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        assert bracket(a, b, vol) == pytest.approx(bracket(b, a, vol), rel=1e-14)
        assert bracket(a, a, vol) >= 0.0
    assert bracket(np.zeros(5), np.zeros(5), np.ones(5)) == 0.0


def test_volume_mean_is_bracket_ratio():
    rng = np.random.default_rng(3)
    a = rng.normal(size=16)
    vol = rng.uniform(0.5, 1.5, size=16)
    ones = np.ones(16)
    assert volume_mean(a, vol) == pytest.approx(
        bracket(a, ones, vol) / bracket(ones, ones, vol), rel=1e-15)


def test_coarse_grain_examples():
    g = UniformGrid1D(4, 4.0)
    out = coarse_grain(FvField1D(g, [1.0, 1.0, 1.0, 1.0]), 2)
    assert np.allclose(out.values, [1.0, 1.0])
    out = coarse_grain(FvField1D(g, [0.0, 2.0, 4.0, 6.0]), 2)
    assert np.allclose(out.values, [1.0, 5.0])


def test_coarse_grain_preserves_mass():
    rng = np.random.default_rng(5)
    g = UniformGrid1D(24, 3.0)
    f = FvField1D(g, rng.normal(size=24))
    mass = np.sum(f.values * g.cell_volumes)
    out = coarse_grain(f, 4)
    assert np.sum(out.values * out.grid.cell_volumes) == pytest.approx(
        mass, rel=1e-14, abs=1e-15)


def test_coarse_grain_composes():
    rng = np.random.default_rng(6)
    g = UniformGrid1D(48, 2.0)
    f = FvField1D(g, rng.normal(size=48))
    once = coarse_grain(coarse_grain(f, 2), 3)
    direct = coarse_grain(f, 6)
    assert np.allclose(once.values, direct.values, rtol=1e-14)


def test_coarse_grain_rejects_non_divisible():
    g = UniformGrid1D(6, 1.0)
    with pytest.raises(ValueError):
        coarse_grain(FvField1D(g, np.zeros(6)), 4)


def test_coarse_grain_2d_mass():
    rng = np.random.default_rng(7)
    g = UniformGrid2D(8, 8, 1.0, 2.0)
    f = FvField2D(g, rng.normal(size=(8, 8)))
    out = coarse_grain_2d(f, 2)
    assert np.sum(out.values) * out.grid.cell_volume == pytest.approx(
        np.sum(f.values) * g.cell_volume, rel=1e-13)


def test_grid_volume_invariant():
    g = UniformGrid1D(10, 2.5)
    assert g.cell_volumes.sum() == pytest.approx(2.5, rel=1e-12)
    with pytest.raises(ValueError):
        UniformGrid1D(4, 1.0, cell_volumes=np.array([0.1, 0.1, 0.1, 0.1]))
    with pytest.raises(ValueError):
        UniformGrid1D(1, 1.0)


def test_nonuniform_volumes_accepted():
    vols = np.array([0.1, 0.2, 0.3, 0.4])
    g = UniformGrid1D(4, 1.0, cell_volumes=vols)
    assert g.dx_min == pytest.approx(0.1)


def test_fields_reject_non_finite():
    g = UniformGrid1D(4, 1.0)
    with pytest.raises(ValueError):
        FvField1D(g, [1.0, np.nan, 0.0, 0.0])
    with pytest.raises(ValueError):
        DgField(g, np.array([[np.inf]] * 4))


def test_spectral_field_structure():
    f = SpectralField(2.0, np.array([1.0 + 2.0j, 3.0 - 1.0j, 0.5j]))
    # mode-0 imaginary part is dropped on construction
    assert f.coeffs[0] == 1.0 + 0.0j
    assert f.n_modes == 2
    x = np.linspace(0.0, 2.0, 7)
    vals = f.evaluate(x)
    assert np.all(np.isreal(vals))
    # conjugate symmetry is structural: evaluate matches the explicit sum
    m = np.arange(-2, 3)
    coeffs = np.concatenate([np.conj(f.coeffs[:0:-1]), f.coeffs])
    direct = np.real(np.exp(2j * np.pi * np.outer(x, m) / 2.0) @ coeffs)
    assert np.allclose(vals, direct, atol=1e-13)


def test_euler_state_roundtrip():
    g = UniformGrid1D(4, 1.0)
    s = EulerState1D.from_primitive(g, np.full(4, 2.0), np.full(4, 0.5),
                                    np.full(4, 3.0), 1.4)
    assert np.allclose(s.pressure(), 3.0)
    assert np.allclose(s.velocity(), 0.5)
    back = EulerState1D.from_conserved(g, s.conserved(), 1.4)
    assert np.allclose(back.rho, s.rho)
    assert np.allclose(back.energy, s.energy)
