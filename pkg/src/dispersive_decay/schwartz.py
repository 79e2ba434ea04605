"""Seeded families of Schwartz-class test data.

Samples are linear combinations of at most four modulated, translated
Gaussians: dense enough to probe the empirical constants of the ratio suites,
analytic enough that closed-form oracles exist.  Every sample is a
deterministic function of (seed, index).
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .grid import GridSpec, SampledFunction, _forward_raw, _inverse_raw
from .littlewood_paley import _step

__all__ = ["schwartz_sample", "band_window", "generate_schwartz"]

_MAX_TERMS = 4


def schwartz_params(seed: int, index: int):
    """Draw the Gaussian-mixture parameters for sample (seed, index)."""
    rng = np.random.default_rng([int(seed), int(index)])
    m = int(rng.integers(1, _MAX_TERMS + 1))
    widths = rng.uniform(0.2, 5.0, m)
    centers = rng.uniform(-10.0, 10.0, m)
    freqs = rng.uniform(-20.0, 20.0, m)
    moduli = rng.uniform(0.2, 1.0, m)
    phases = rng.uniform(0.0, 2.0 * np.pi, m)
    coeffs = moduli * np.exp(1j * phases)
    return widths, centers, freqs, coeffs


def schwartz_sample(grid: GridSpec, seed: int, index: int) -> SampledFunction:
    """Unfiltered random Schwartz sample: sum of c_i exp(-a_i (x-x0_i)^2 + i b_i x)."""
    widths, centers, freqs, coeffs = schwartz_params(seed, index)
    x = grid.x
    vals = np.zeros(grid.size, dtype=np.complex128)
    for a, x0, b, c in zip(widths, centers, freqs, coeffs):
        vals += c * np.exp(-a * (x - x0) ** 2 + 1j * b * x)
    return SampledFunction(grid, vals)


def band_window(xi: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Smooth window, exactly 0 outside lo <= |xi| <= hi, exactly 1 on a plateau inside."""
    if not (0 < lo < hi):
        raise ParameterError("need 0 < lo < hi")
    rise = min(lo, (hi - lo) / 3.0)
    fall = min(hi / 2.0, (hi - lo) / 3.0)
    a = np.abs(xi)
    return _step((a - lo) / rise, 1.0) * _step((hi - a) / fall, 1.0)


def generate_schwartz(seed: int, index: int, band: tuple, grid: GridSpec) -> SampledFunction:
    """Seeded Schwartz sample, spectrally band-passed to ``band`` with a smooth cutoff.

    The upper band edge is clamped below the Nyquist frequency of the grid so
    that the declared spectral support is representable.
    """
    lo, hi = float(band[0]), float(band[1])
    if not (0 < lo < hi):
        raise ParameterError("band must satisfy 0 < lo < hi")
    if lo >= grid.nyquist:
        raise ParameterError(
            f"band lower edge {lo:g} is not below the Nyquist frequency {grid.nyquist:g}"
        )
    hi_eff = min(hi, 0.95 * grid.nyquist)
    raw = schwartz_sample(grid, seed, index)
    hat = _forward_raw(grid, raw.values)
    filtered = band_window(grid.xi, lo, hi_eff) * hat
    return SampledFunction(grid, _inverse_raw(grid, filtered), band_limit=hi_eff)
