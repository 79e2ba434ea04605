"""Fourier layer: convention, round trip, Plancherel diagnostic."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import eval_hermite

from dispersive_decay.errors import BoundaryDecayWarning, InvalidInputError
from dispersive_decay.grid import (
    GridSpec,
    SampledFunction,
    SpectralFunction,
    forward_ft,
    inverse_ft,
    plancherel_defect,
)

from conftest import gaussian


def quad_ft(fn, xi: float) -> complex:
    """Oracle: adaptive quadrature of the defining integral fhat(xi)."""
    re = quad(lambda x: (fn(x) * np.exp(-1j * xi * x)).real, -np.inf, np.inf,
              limit=400)[0]
    im = quad(lambda x: (fn(x) * np.exp(-1j * xi * x)).imag, -np.inf, np.inf,
              limit=400)[0]
    return re + 1j * im


class TestGridSpec:
    def test_nodes(self):
        g = GridSpec(half_width=4.0, size=16)
        assert g.spacing == 0.5
        assert g.x[0] == -4.0
        assert g.x[-1] == 3.5
        np.testing.assert_allclose(g.xi, np.pi * np.arange(-8, 8) / 4.0)
        assert g.nyquist == pytest.approx(np.pi * 16 / 8.0)

    def test_frequency_symmetry(self):
        g = GridSpec(half_width=10.0, size=64)
        xi = g.xi
        # symmetric about 0 except the single node at -Nyquist
        np.testing.assert_allclose(xi[1:], -xi[1:][::-1])

    @pytest.mark.parametrize("kwargs", [
        dict(half_width=0.0, size=64),
        dict(half_width=-1.0, size=64),
        dict(half_width=1.0, size=8),
        dict(half_width=1.0, size=65),
        dict(half_width=1.0, size=96),  # even but not a power of two
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            GridSpec(**kwargs)

    def test_band_limit_below_nyquist(self):
        g = GridSpec(half_width=4.0, size=16)
        with pytest.raises(InvalidInputError):
            SampledFunction(g, np.zeros(16), band_limit=g.nyquist)
        SampledFunction(g, np.zeros(16), band_limit=0.9 * g.nyquist)

    def test_values_immutable(self):
        g = GridSpec(half_width=4.0, size=16)
        f = SampledFunction(g, np.zeros(16))
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestForward:
    def test_gaussian_closed_form(self, grid40):
        f = gaussian(grid40, a=0.5)
        hat = forward_ft(f)
        exact = np.sqrt(2.0 * np.pi) * np.exp(-grid40.xi ** 2 / 2.0)
        assert np.max(np.abs(hat.values - exact)) < 1e-10

    def test_gaussian_quadrature_oracle(self, grid40):
        f = gaussian(grid40, a=0.5)
        hat = forward_ft(f)
        for xi in (0.0, 0.7, -2.3, 5.0):
            j = int(np.argmin(np.abs(grid40.xi - xi)))
            oracle = quad_ft(lambda x: np.exp(-x ** 2 / 2.0), grid40.xi[j])
            assert abs(hat.values[j] - oracle) < 1e-10

    def test_gaussian_real_valued(self, grid40):
        hat = forward_ft(gaussian(grid40, a=0.5))
        assert np.max(np.abs(hat.values.imag)) < 1e-12 * np.max(np.abs(hat.values))

    def test_zero(self, grid40):
        hat = forward_ft(SampledFunction(grid40, np.zeros(grid40.size)))
        assert np.all(hat.values == 0)

    def test_modulation(self, grid40):
        b = 3.0
        hat = forward_ft(gaussian(grid40, a=0.5, b=b))
        exact = np.sqrt(2.0 * np.pi) * np.exp(-(grid40.xi - b) ** 2 / 2.0)
        assert np.max(np.abs(hat.values - exact)) < 1e-10

    def test_modulation_quadrature_oracle(self, grid40):
        b = 3.0
        hat = forward_ft(gaussian(grid40, a=0.5, b=b))
        j = int(np.argmin(np.abs(grid40.xi - 2.9)))
        oracle = quad_ft(lambda x: np.exp(-x ** 2 / 2.0 + 1j * b * x), grid40.xi[j])
        assert abs(hat.values[j] - oracle) < 1e-10

    def test_non_finite_rejected(self, grid40):
        vals = np.zeros(grid40.size)
        vals[0] = np.nan
        with pytest.raises(InvalidInputError):
            forward_ft(SampledFunction(grid40, vals))

    def test_boundary_decay_warning(self):
        g = GridSpec(half_width=2.0, size=64)
        f = gaussian(g, a=0.5)  # visibly nonzero at |x| = 2
        with pytest.warns(BoundaryDecayWarning):
            hat = forward_ft(f)
        assert hat.notes  # warning recorded on the result


class TestInverse:
    def test_hermite_round_trip(self, grid40):
        h2 = eval_hermite(2, grid40.x) * np.exp(-grid40.x ** 2 / 2.0)
        f = SampledFunction(grid40, h2.astype(complex))
        back = inverse_ft(forward_ft(f))
        rel = np.linalg.norm(back.values - f.values) / np.linalg.norm(f.values)
        assert rel < 1e-12

    def test_zero(self, grid40):
        f = inverse_ft(SpectralFunction(grid40, np.zeros(grid40.size)))
        assert np.all(f.values == 0)

    def test_inverse_quadrature_oracle(self, grid40):
        # FFT inverse of a Gaussian transform vs direct quadrature of the
        # inversion integral (1/2pi) int fhat(xi) exp(i x xi) dxi
        hat_fn = lambda xi: np.sqrt(2.0 * np.pi) * np.exp(-xi ** 2 / 2.0)
        F = SpectralFunction(grid40, hat_fn(grid40.xi).astype(complex))
        f = inverse_ft(F)
        for x in (0.0, 1.3, -4.2):
            n = int(np.argmin(np.abs(grid40.x - x)))
            xn = grid40.x[n]
            oracle = quad(lambda xi: hat_fn(xi) * np.cos(xn * xi), -np.inf,
                          np.inf, limit=400)[0] / (2.0 * np.pi)
            assert abs(f.values[n] - oracle) < 1e-9


class TestPlancherel:
    def test_resolved(self, grid40):
        assert plancherel_defect(gaussian(grid40, a=0.5)) < 1e-10

    def test_zero(self, grid40):
        assert plancherel_defect(SampledFunction(grid40, np.zeros(grid40.size))) == 0.0

    def test_under_resolved(self):
        g = GridSpec(half_width=40.0, size=16)
        f = gaussian(g, a=0.5)
        assert plancherel_defect(f) > 1e-3


class TestProperties:
    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_round_trip_any_input(self, seed):
        g = GridSpec(half_width=5.0, size=64)
        rng = np.random.default_rng(seed)
        vals = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        f = SampledFunction(g, vals)
        back = inverse_ft(forward_ft(f))
        rel = np.linalg.norm(back.values - vals) / np.linalg.norm(vals)
        assert rel < 1e-12

    @given(a=st.floats(-3, 3), b=st.floats(-3, 3))
    @settings(max_examples=20, deadline=None)
    def test_linearity(self, a, b):
        g = GridSpec(half_width=5.0, size=64)
        rng = np.random.default_rng(7)
        f = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        h = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        lhs = forward_ft(SampledFunction(g, a * f + b * h)).values
        rhs = (a * forward_ft(SampledFunction(g, f)).values
               + b * forward_ft(SampledFunction(g, h)).values)
        scale = max(np.max(np.abs(lhs)), 1.0)
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale

    def test_translation_law(self, grid40):
        # f(. - x0) -> exp(-i xi x0) fhat(xi) for grid-aligned x0
        shift_cells = 128
        x0 = shift_cells * grid40.spacing
        f = gaussian(grid40, a=1.0)
        shifted = gaussian(grid40, a=1.0, x0=x0)
        lhs = forward_ft(shifted).values
        rhs = np.exp(-1j * grid40.xi * x0) * forward_ft(f).values
        assert np.max(np.abs(lhs - rhs)) < 1e-10
