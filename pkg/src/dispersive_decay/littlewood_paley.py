"""Dyadic frequency decomposition: smooth bump, projections, and ratio checks.

The bump is built from the classical exp(-1/x) glue, so its plateau (psi = 1
for |x| <= 1) and support (psi = 0 for |x| >= 2) are exact, not approximate.
The dyadic pieces psi_k(xi) = psi(xi/2^k) - psi(xi/2^{k-1}) telescope exactly,
which is what the reconstruction identity uses; psi_k is a smooth cutoff, not
an orthogonal projection, and no idempotence is asserted.

The ratio operations at the bottom are the numerical content of the two
weighted-norm lemmas and of the Bernstein inequalities: each returns the
quotient of the two sides of an inequality whose constant is implicit, and the
suites record the empirical maxima as regression-pinned constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calculus import lp_norm, weighted_norm
from .errors import OutOfBandError, ParameterError, UndefinedRatioError
from .grid import (
    GridSpec,
    SampledFunction,
    SpectralFunction,
    _forward_raw,
    _inverse_raw,
    l2_norm_physical,
    l2_norm_spectral,
    )

__all__ = [
    "BumpFunction",
    "make_bump",
    "DyadicProjection",
    "project",
    "bernstein_ratio",
    "bernstein_derivative_ratio",
    "lemma1_ratio",
    "lemma2_ratio",
]

# pieces whose spectral peak falls below this (relative to the full spectrum)
# are treated as identically zero: the grid carries no information there
_ZERO_PIECE_RTOL = 1e-280


def _glue(u: np.ndarray, s: float) -> np.ndarray:
    """exp(-s/u) for u > 0, extended by 0."""
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-s / u[pos])
    return out


def _step(u: np.ndarray, s: float) -> np.ndarray:
    """Smooth step: 0 for u <= 0, 1 for u >= 1, strictly increasing between."""
    a = _glue(u, s)
    b = _glue(1.0 - u, s)
    out = np.empty_like(u)
    lo = u <= 0
    hi = u >= 1
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    out[mid] = a[mid] / (a[mid] + b[mid])
    return out


def _step_deriv(u: np.ndarray, s: float) -> np.ndarray:
    out = np.zeros_like(u)
    # keep away from the endpoints where the quotient is 0/0 at machine level
    mid = (u > 1e-9) & (u < 1.0 - 1e-9)
    um = u[mid]
    a = np.exp(-s / um)
    b = np.exp(-s / (1.0 - um))
    da = s / um**2 * a
    db = s / (1.0 - um) ** 2 * b
    out[mid] = (da * b + a * db) / (a + b) ** 2
    return out


@dataclass(frozen=True)
class BumpFunction:
    """Even C-infinity bump: 1 on [-1, 1], supported in [-2, 2], values in [0, 1]."""

    sharpness: float = 1.0

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 1.0 - _step(np.abs(x) - 1.0, self.sharpness)

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return -np.sign(x) * _step_deriv(np.abs(x) - 1.0, self.sharpness)

    def dyadic_piece(self, xi, k: int) -> np.ndarray:
        """psi_k(xi) = psi(xi / 2^k) - psi(xi / 2^{k-1}); supported on 2^{k-1} <= |xi| <= 2^{k+1}."""
        xi = np.asarray(xi, dtype=float)
        return self(xi / 2.0**k) - self(xi / 2.0 ** (k - 1))

    def dyadic_piece_derivative(self, xi, k: int) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.derivative(xi / 2.0**k) / 2.0**k - self.derivative(
            xi / 2.0 ** (k - 1)
        ) / 2.0 ** (k - 1)


def make_bump(transition_sharpness: float = 1.0) -> BumpFunction:
    if not (0 < transition_sharpness <= 10):
        raise ParameterError("transition_sharpness must be in (0, 10]")
    return BumpFunction(transition_sharpness)


_DEFAULT_BUMP = BumpFunction()


def _piece_hat(f: SampledFunction, k: int, bump: BumpFunction) -> np.ndarray:
    if 2.0 ** (k + 1) > f.grid.nyquist:
        raise OutOfBandError(
            f"band 2^{k + 1} exceeds the Nyquist frequency {f.grid.nyquist:g}"
        )
    hat = _forward_raw(f.grid, f.values)
    return bump.dyadic_piece(f.grid.xi, k) * hat


def project(f: SampledFunction, k: int, bump: BumpFunction = _DEFAULT_BUMP) -> SampledFunction:
    """The Littlewood-Paley piece P_k f, back on the physical side."""
    piece = _piece_hat(f, k, bump)
    return SampledFunction(
        f.grid, _inverse_raw(f.grid, piece), band_limit=min(2.0 ** (k + 1), f.grid.nyquist * 0.999)
    )


@dataclass(frozen=True)
class DyadicProjection:
    """The family {P_k phi} for k in [k_min, k_max], plus the low-frequency remainder."""

    source: SampledFunction
    k_range: tuple
    pieces: dict = field(default_factory=dict)
    bump: BumpFunction = _DEFAULT_BUMP

    @classmethod
    def decompose(cls, f: SampledFunction, k_min: int, k_max: int,
                  bump: BumpFunction = _DEFAULT_BUMP) -> "DyadicProjection":
        if k_min > k_max:
            raise ParameterError("k_min must not exceed k_max")
        hat = _forward_raw(f.grid, f.values)
        pieces = {
            k: SpectralFunction(f.grid, bump.dyadic_piece(f.grid.xi, k) * hat)
            for k in range(k_min, k_max + 1)
        }
        return cls(source=f, k_range=(k_min, k_max), pieces=pieces, bump=bump)

    def low_remainder(self) -> SpectralFunction:
        """psi(xi / 2^{k_min - 1}) * fhat, the part below the lowest annulus."""
        hat = _forward_raw(self.source.grid, self.source.values)
        cut = self.bump(self.source.grid.xi / 2.0 ** (self.k_range[0] - 1))
        return SpectralFunction(self.source.grid, cut * hat)

    def reconstruct(self) -> SpectralFunction:
        total = self.low_remainder().values.copy()
        for piece in self.pieces.values():
            total = total + piece.values
        return SpectralFunction(self.source.grid, total)


def _require_nonzero_piece(piece_hat: np.ndarray, full_hat: np.ndarray, k: int):
    peak = np.max(np.abs(piece_hat))
    ref = np.max(np.abs(full_hat))
    if peak == 0.0 or (ref > 0 and peak < _ZERO_PIECE_RTOL * ref):
        raise UndefinedRatioError(f"P_k f vanishes on the grid for k = {k}")


def bernstein_ratio(f: SampledFunction, k: int, p, q,
                    bump: BumpFunction = _DEFAULT_BUMP) -> float:
    """||P_k f||_q / (2^{k(1/p - 1/q)} ||P_k f||_p) for 1 <= p <= q <= inf."""
    pv = np.inf if p in (np.inf, "inf") else p
    qv = np.inf if q in (np.inf, "inf") else q
    if pv > qv:
        raise ParameterError("need p <= q")
    hat = _forward_raw(f.grid, f.values)
    piece_hat = bump.dyadic_piece(f.grid.xi, k) * hat
    _require_nonzero_piece(piece_hat, hat, k)
    if 2.0 ** (k + 1) > f.grid.nyquist:
        raise OutOfBandError(f"band 2^{k + 1} exceeds Nyquist")
    piece = SampledFunction(f.grid, _inverse_raw(f.grid, piece_hat))
    inv_p = 0.0 if pv == np.inf else 1.0 / pv
    inv_q = 0.0 if qv == np.inf else 1.0 / qv
    return lp_norm(piece, qv) / (2.0 ** (k * (inv_p - inv_q)) * lp_norm(piece, pv))


def bernstein_derivative_ratio(f: SampledFunction, k: int, s: float, p,
                               bump: BumpFunction = _DEFAULT_BUMP) -> tuple:
    """The two ratios whose joint boundedness expresses ||P_k g||_p ~ 2^{-sk} ||D^s P_k g||_p.

    Returns (lower, upper) = (lhs/rhs, rhs/lhs) with lhs = ||P_k g||_p and
    rhs = 2^{-sk} ||(-Laplacian)^{s/2} P_k g||_p.
    """
    if not (0 <= s <= 2):
        raise ParameterError("s must be in [0, 2]")
    hat = _forward_raw(f.grid, f.values)
    piece_hat = bump.dyadic_piece(f.grid.xi, k) * hat
    _require_nonzero_piece(piece_hat, hat, k)
    xi = f.grid.xi
    mult = np.zeros_like(xi)
    nz = xi != 0.0
    mult[nz] = np.abs(xi[nz]) ** s
    piece = SampledFunction(f.grid, _inverse_raw(f.grid, piece_hat))
    dpiece = SampledFunction(f.grid, _inverse_raw(f.grid, mult * piece_hat))
    lhs = lp_norm(piece, p)
    rhs = 2.0 ** (-s * k) * lp_norm(dpiece, p)
    if rhs == 0.0 or lhs == 0.0:
        raise UndefinedRatioError(f"degenerate piece for k = {k}")
    return lhs / rhs, rhs / lhs


def xi_derivative_of_piece(f: SampledFunction, k: int,
                           bump: BumpFunction = _DEFAULT_BUMP) -> SpectralFunction:
    """d/dxi of psi_k * fhat, computed as the forward transform of -i x times the piece.

    This is the Plancherel manipulation used in the proof of the first
    weighted-norm lemma, and avoids finite differencing on the xi grid.
    """
    hat = _forward_raw(f.grid, f.values)
    piece_hat = bump.dyadic_piece(f.grid.xi, k) * hat
    piece_phys = _inverse_raw(f.grid, piece_hat)
    return SpectralFunction(f.grid, _forward_raw(f.grid, -1j * f.grid.x * piece_phys))


def lemma1_ratio(f: SampledFunction, k: int, bump: BumpFunction = _DEFAULT_BUMP,
                 _denom: float | None = None) -> float:
    """2^k ||d/dxi (psi_k fhat)||_{L^2_xi} / (||f||_{L^2} + ||x f'||_{L^2})."""
    hat = _forward_raw(f.grid, f.values)
    piece_hat = bump.dyadic_piece(f.grid.xi, k) * hat
    if _denom is None:
        _denom = l2_norm_physical(f) + weighted_norm(f)
    if _denom == 0.0:
        raise UndefinedRatioError("zero denominator")
    if not np.any(piece_hat):
        return 0.0  # fhat vanishes on supp psi_k; the bound is trivially met
    num = l2_norm_spectral(xi_derivative_of_piece(f, k, bump))
    return 2.0**k * num / _denom


def lemma2_ratio(f: SampledFunction, k: int, s: float,
                 bump: BumpFunction = _DEFAULT_BUMP, _denom: float | None = None) -> float:
    """||psi_k fhat||_{L^inf} / (||P_k f||_{L^2} + 2^{-sk}(||f||_{L^2} + ||x f'||_{L^2}))."""
    if not (0.5 < s < 1.0):
        raise ParameterError("s must lie in (1/2, 1)")
    hat = _forward_raw(f.grid, f.values)
    piece_hat = bump.dyadic_piece(f.grid.xi, k) * hat
    if _denom is None:
        _denom = l2_norm_physical(f) + weighted_norm(f)
    if not np.any(piece_hat):
        if _denom == 0.0:
            raise UndefinedRatioError("zero denominator")
        return 0.0  # fhat vanishes on supp psi_k; the bound is trivially met
    piece_l2 = l2_norm_spectral(SpectralFunction(f.grid, piece_hat)) / np.sqrt(2.0 * np.pi)
    denom = piece_l2 + 2.0 ** (-s * k) * _denom
    if denom == 0.0:
        raise UndefinedRatioError("zero denominator")
    return float(np.max(np.abs(piece_hat))) / denom


def resolvable_k(grid: GridSpec, k: int) -> bool:
    """True when the annulus 2^{k-1} < |xi| < 2^{k+1} contains at least one grid node
    and fits below the Nyquist frequency."""
    if 2.0 ** (k + 1) > grid.nyquist:
        return False
    a = np.abs(grid.xi)
    return bool(np.any((a > 2.0 ** (k - 1)) & (a < 2.0 ** (k + 1))))
