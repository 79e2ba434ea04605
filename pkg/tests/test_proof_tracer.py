"""Band partition, kernel lower bounds, q0 infima, and the traced proof terms."""

import numpy as np
import pytest

from dispersive_decay.errors import ParameterError
from dispersive_decay.grid import GridSpec, SampledFunction, SpectralFunction, forward_ft, inverse_ft
from dispersive_decay.proof_tracer import (
    build_partition,
    annulus_decomposition,
    choose_l0,
    kernel_lower_bound,
    lambda_high,
    lambda_low,
    q0_estimate,
    trace_terms,
)
from dispersive_decay.propagator import (
    SpectralAmplitude,
    oscillatory_integral,
    stationary_point,
)
from dispersive_decay.schwartz import band_window, generate_schwartz


GRID = GridSpec(half_width=200.0, size=32768)


class TestBandPartition:
    def test_t_zero_rejected(self):
        with pytest.raises(ParameterError):
            build_partition(0.0, 1.0)

    def test_small_t_empty_middle(self):
        part = build_partition(1.0, -1.0)
        assert lambda_low(1.0) == 2.0 ** 9
        assert lambda_high(1.0) == 2.0 ** -9
        assert part.middle == ()
        assert part.I1 == part.I2 == part.I3 == ()

    def test_unit_ray_all_middle_in_I2(self):
        # |t/x| = 1: I2 covers k in [-8, 8], which contains the whole middle band
        part = build_partition(2048.0, -2048.0)
        assert part.middle == (-1, 0, 1)
        assert part.I2 == (-1, 0, 1)
        assert part.I1 == () and part.I3 == ()

    def test_middle_band_definition(self):
        t = 2.0 ** 13
        part = build_partition(t, -37.0)
        for k in range(-20, 21):
            inside = lambda_low(t) <= 2.0 ** k <= lambda_high(t)
            assert (k in part.middle) == inside

    def test_I2_size_bound(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            t = float(rng.uniform(2.0 ** 10, 2.0 ** 16))
            x = -float(rng.uniform(1.0, t))
            part = build_partition(t, x)
            assert len(part.I2) <= 17

    def test_union_covers_middle(self):
        part = build_partition(2.0 ** 14, -100.0)
        assert set(part.I1) | set(part.I2) | set(part.I3) == set(part.middle)

    def test_boundary_k_kept_in_both(self):
        # ray = 16 * 2^{k/2} at k = 0 puts k on the I1/I2 boundary
        part = build_partition(2048.0, -128.0)
        assert 0 in part.I1 and 0 in part.I2

    def test_x_zero_flagged(self):
        part = build_partition(2048.0, 0.0)
        assert part.flagged
        assert part.I1 == part.middle
        assert part.I2 == () and part.I3 == ()

    def test_general_alpha_sets(self):
        # alpha = 0.4: membership via 2^{0.6 k} against the margin
        t, x, M = 2.0 ** 14, -4.0, 16.0
        part = build_partition(t, x, alpha=0.4, margin=M)
        ray = abs(t / x)
        for k in part.middle:
            v = 2.0 ** (0.6 * k)
            assert (k in part.I1) == (v <= ray / M)
            assert (k in part.I2) == (ray / M <= v <= M * ray)
            assert (k in part.I3) == (v >= M * ray)


class TestKernelLowerBound:
    def test_x_zero_exact(self):
        # no cancellation: min |Phi'| on the annulus, attained at xi = 2^{k+1}
        for k in (-1, 0, 1):
            res = kernel_lower_bound(k, 2048.0, 0.0)
            exact = 0.5 * 2.0 ** (-(k + 1) / 2.0)
            assert res.value == pytest.approx(exact, rel=1e-6)

    def test_slow_ray_extreme(self):
        # |x/t| = 2^{-k/2}/32 with k in I1: min >= 0.32 * 2^{-k/2}
        t, k = 4096.0, 2
        x = -t * 2.0 ** (-k / 2.0) / 32.0
        part = build_partition(t, x)
        assert k in part.I1
        res = kernel_lower_bound(k, t, x)
        assert res.value > 0.32 * 2.0 ** (-k / 2.0)
        assert res.ratio > 0

    def test_grid_vs_endpoint_analytic(self):
        # |x/t + Phi'| is monotone in |xi| on each sign branch, so the min is
        # an endpoint value
        t, k = 4096.0, 2
        x = -t * 2.0 ** (-k / 2.0) / 32.0
        res = kernel_lower_bound(k, t, x)
        r = abs(x / t)
        ends = [abs(-r + 0.5 * xi ** -0.5) for xi in (2.0 ** (k - 1), 2.0 ** (k + 1))]
        ends += [abs(r + 0.5 * xi ** -0.5) for xi in (2.0 ** (k - 1), 2.0 ** (k + 1))]
        assert res.value == pytest.approx(min(ends), rel=1e-6)

    def test_inadmissible_k(self):
        part = build_partition(2048.0, -2048.0)
        assert 0 in part.I2 and 0 not in part.I1 and 0 not in part.I3
        with pytest.raises(ParameterError):
            kernel_lower_bound(0, 2048.0, -2048.0)


class TestQ0Estimate:
    T, X = 4096.0, -64.0  # ray 64, xi0 = 2^{10}, k = 10 in I2

    def test_spec_case_positive(self):
        assert stationary_point(self.T, self.X, 0.5) == pytest.approx(1024.0)
        res = q0_estimate(10, 7, self.T, self.X)
        assert res is not None
        assert res.value > 0 and res.ratio > 0

    def test_brute_force_oracle(self):
        # independent 10^6-sample minimum over the same intersection
        res = q0_estimate(10, 7, self.T, self.X)
        xi0 = 1024.0
        pieces = []
        for (a, b) in [(xi0 + 64.0, xi0 + 256.0), (xi0 - 256.0, xi0 - 64.0)]:
            lo, hi = max(a, 2.0 ** 9), min(b, 2.0 ** 11)
            if lo < hi:
                pieces.append((lo, hi))
        samples = np.concatenate([np.linspace(a, b, 500000) for a, b in pieces])
        brute = np.min(np.abs(self.X + self.T * 0.5 * samples ** -0.5))
        assert abs(res.value - brute) / brute < 0.01

    def test_empty_intersection_skips(self):
        # 2^l far larger than the annulus: no xi satisfies both constraints
        assert q0_estimate(10, 30, self.T, self.X) is None

    def test_monotone_in_l(self):
        vals = []
        for l in (5, 6, 7, 8):
            r = q0_estimate(10, l, self.T, self.X)
            if r is not None:
                vals.append(r.value)
        assert all(a <= b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))

    def test_k_not_in_I2(self):
        with pytest.raises(ParameterError):
            q0_estimate(2, 5, self.T, self.X)


class TestAnnulusDecomposition:
    def test_triangle_and_telescoping(self):
        t = 2048.0
        phi = generate_schwartz(0, 0, (0.5, 16.0), GRID)
        x = -t * 0.5 / np.sqrt(2.0)  # ray along the xi ~ 2 stationary ray
        part = build_partition(t, x)
        k = next(k for k in part.I2 if 0 <= k <= 3)
        pieces = annulus_decomposition(phi, k, t, x)
        total = sum(m for _, m in pieces)
        # undecomposed band integral
        amp = SpectralAmplitude(forward_ft(phi))
        from dispersive_decay.littlewood_paley import make_bump
        bump = make_bump()

        def band_amp(xi):
            return amp(xi) * bump.dyadic_piece(xi, k)

        from dispersive_decay.proof_tracer import _annulus_intervals, _intersect
        band = _intersect(_annulus_intervals(k), amp.support)
        whole = abs(oscillatory_integral(band_amp, band, t, x, 0.5,
                                         amp_scale=min(8 * amp.xi_spacing, 2.0 ** k / 8))
                    ) / (2 * np.pi)
        assert total >= whole - 1e-8

    def test_center_zero_when_spectrum_avoids_xi0(self):
        # data supported well away from xi0 = 1 +- 2^{l0+1}
        t = 2048.0
        x = -t / 2.0  # xi0 = 1
        hat = (np.exp(-((np.abs(GRID.xi) - 0.7) / 0.05) ** 2)
               * band_window(GRID.xi, 0.55, 0.85)).astype(complex)
        phi = inverse_ft(SpectralFunction(GRID, hat))
        part = build_partition(t, x)
        assert 0 in part.I2
        pieces = annulus_decomposition(phi, 0, t, x)
        assert pieces[0][0] == "center"
        assert pieces[0][1] == 0.0

    def test_l0_choice(self):
        # 2^{l0} ~ 2^{(2-alpha)k/2} / sqrt(|t|)
        assert choose_l0(10, 4096.0, 0.5) == round(7.5 - 6.0)
        assert choose_l0(4, 2.0 ** 11, 0.4) == round(3.2 - 5.5)


class TestTraceTerms:
    def test_zero_input(self):
        phi = SampledFunction(GRID, np.zeros(GRID.size))
        trace = trace_terms(phi, 2048.0, -10.0)
        assert trace.term_A == trace.term_B1 == trace.term_B2 == 0.0
        assert trace.term_B3 == trace.term_C == 0.0
        assert trace.reconstruction_defect == 0.0

    def test_reconstruction_and_triangle(self):
        t = 2048.0
        phi = generate_schwartz(0, 0, (0.5, 16.0), GRID)
        x = -t * 0.5 / np.sqrt(2.0)
        trace = trace_terms(phi, t, x, with_annuli=False)
        assert trace.reconstruction_defect < 1e-8
        total = trace.low_mag + sum(trace.piece_mags.values())
        assert total >= abs(trace.u_value) - 1e-6

    def test_ratios_finite(self):
        t = 2048.0
        phi = generate_schwartz(1, 3, (0.5, 16.0), GRID)
        x = -t * 0.5 / np.sqrt(2.0)
        trace = trace_terms(phi, t, x, with_annuli=True)
        for r in (trace.ratio_A, trace.ratio_B1, trace.ratio_B2,
                  trace.ratio_B3, trace.ratio_C):
            assert np.isfinite(r) and r >= 0
        assert trace.s_choice == 0.75
        for bv in trace.q0_map.values():
            assert bv.ratio > 0
