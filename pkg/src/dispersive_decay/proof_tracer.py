"""Term-by-term numerical instantiation of the decay proof.

For a fixed evaluation point (t, x) the propagator value is split over dyadic
frequency bands into a low block (A), a middle block (B) further partitioned
by the index sets I1/I2/I3 (how the ray x/t compares with the group speeds on
the annulus), and a high block (C).  Each term is computed by direct
oscillatory quadrature on its band and reported together with the ratio to the
right side of the bound it must satisfy; the constants are implicit in the
analysis, so the suites pin the empirical ratios instead of asserting absolute
thresholds.

Index-set membership uses closed inequalities exactly as stated, so a boundary
k may belong to two sets; it is recorded in both (upper bounds tolerate double
counting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .calculus import hs_norm, weighted_norm
from .errors import ParameterError
from .grid import SampledFunction, _forward_raw, l2_norm_physical
from .littlewood_paley import BumpFunction, make_bump
from .propagator import (
    SpectralAmplitude,
    _dphi,
    oscillatory_integral,
    stationary_point,
)
from .grid import SpectralFunction

__all__ = [
    "BandPartition",
    "ProofTrace",
    "build_partition",
    "trace_terms",
    "kernel_lower_bound",
    "q0_estimate",
    "annulus_decomposition",
]

_K_SCAN = range(-64, 65)
_FINE = 1 << 14  # grid points per interval for infima (belt and braces; the
                 # monotone structure of Q' makes the endpoint checks decisive)


def lambda_low(t: float) -> float:
    return 2.0**10 / (1.0 + abs(t))


def lambda_high(t: float) -> float:
    return 2.0**-10 * (1.0 + abs(t))


@dataclass(frozen=True)
class BandPartition:
    """The frequency-band split of the proof at a fixed (t, x).

    ``a_max_k``/``c_min_k`` bound the (conceptually infinite) low and high
    blocks; ``middle`` and the index sets are explicit lists.  ``flagged`` is
    set for x = 0, where the ray |t/x| degenerates and I1 absorbs the whole
    middle band.
    """

    t: float
    x: float
    alpha: float
    margin: float
    lambda_t: float
    Lambda_t: float
    middle: tuple
    I1: tuple
    I2: tuple
    I3: tuple
    a_max_k: int
    c_min_k: int
    flagged: bool = False

    def membership(self, k: int) -> list:
        out = []
        if k <= self.a_max_k:
            out.append("A")
        if k in self.I1:
            out.append("I1")
        if k in self.I2:
            out.append("I2")
        if k in self.I3:
            out.append("I3")
        if k >= self.c_min_k:
            out.append("C")
        return out


def build_partition(t: float, x: float, alpha: float = 0.5, margin: float = 16.0) -> BandPartition:
    """Evaluate the index-set inequalities exactly as written.

    For alpha = 1/2 the sets reduce to the original ones with the constant 16,
    since 2^{k(1-alpha)} = 2^{k/2}; ``margin`` is the constant M of the
    generalized partition and defaults to 16 accordingly.
    """
    if t == 0.0:
        raise ParameterError("t must be nonzero")
    if margin < 1.0:
        raise ParameterError("margin must be >= 1")
    lam = lambda_low(t)
    Lam = lambda_high(t)
    middle = [k for k in _K_SCAN if lam <= 2.0**k <= Lam]
    a_max = max((k for k in _K_SCAN if 2.0**k <= lam), default=_K_SCAN.start - 1)
    c_min = min((k for k in _K_SCAN if 2.0**k >= Lam), default=_K_SCAN.stop)
    if x == 0.0:
        return BandPartition(
            t=t, x=x, alpha=alpha, margin=margin, lambda_t=lam, Lambda_t=Lam,
            middle=tuple(middle), I1=tuple(middle), I2=(), I3=(),
            a_max_k=a_max, c_min_k=c_min, flagged=True,
        )
    ray = abs(t / x)
    I1 = tuple(k for k in middle if 2.0 ** (k * (1.0 - alpha)) <= ray / margin)
    I2 = tuple(
        k for k in middle
        if ray / margin <= 2.0 ** (k * (1.0 - alpha)) <= margin * ray
    )
    I3 = tuple(k for k in middle if 2.0 ** (k * (1.0 - alpha)) >= margin * ray)
    return BandPartition(
        t=t, x=x, alpha=alpha, margin=margin, lambda_t=lam, Lambda_t=Lam,
        middle=tuple(middle), I1=I1, I2=I2, I3=I3,
        a_max_k=a_max, c_min_k=c_min,
    )


def _ray_sets(k: int, t: float, x: float, alpha: float, margin: float) -> set:
    """Which of I1/I2/I3 the ray inequalities alone place k in (closed, so a
    boundary k can land in two).  The middle-band restriction scopes the
    partition, not these pointwise admissibility checks."""
    if t == 0.0:
        raise ParameterError("t must be nonzero")
    if x == 0.0:
        return {"I1"}
    ray = abs(t / x)
    v = 2.0 ** (k * (1.0 - alpha))
    out = set()
    if v <= ray / margin:
        out.add("I1")
    if ray / margin <= v <= margin * ray:
        out.add("I2")
    if v >= margin * ray:
        out.add("I3")
    return out


class BoundedValue(NamedTuple):
    """A computed magnitude together with its ratio to the bound it must satisfy."""

    value: float
    ratio: float


def _annulus_intervals(k: int):
    r0, r1 = 2.0 ** (k - 1), 2.0 ** (k + 1)
    return [(-r1, -r0), (r0, r1)]


def _intersect(iv1, iv2):
    out = []
    for (a, b) in iv1:
        for (c, d) in iv2:
            lo, hi = max(a, c), min(b, d)
            if lo < hi:
                out.append((lo, hi))
    return out


def _min_abs_dq(intervals, t, x, alpha) -> float:
    best = np.inf
    for (a, b) in intervals:
        grid = np.linspace(a, b, _FINE)
        vals = np.abs(x + t * _dphi(grid, alpha))
        best = min(best, float(np.min(vals)))
    return best


def kernel_lower_bound(k: int, t: float, x: float, alpha: float = 0.5,
                       margin: float = 16.0) -> BoundedValue:
    """min over supp psi_k of |x/t + Phi'(xi)|, and its ratio to 2^{-k(1-alpha)}.

    Only meaningful for k in I1 or I3, where the ray is separated from the
    group speeds on the annulus and integration by parts wins.
    """
    if not ({"I1", "I3"} & _ray_sets(k, t, x, alpha, margin)):
        raise ParameterError(f"k = {k} is not in I1 or I3 for (t, x) = ({t}, {x})")
    value = _min_abs_dq(_annulus_intervals(k), t / abs(t), x / abs(t), alpha)
    # x/t + Phi' evaluated by scaling: |x/t + Phi'| = |x' + t' Phi'| with t' = 1
    return BoundedValue(value, value / 2.0 ** (-k * (1.0 - alpha)))


def q0_estimate(k: int, l: int, t: float, x: float, alpha: float = 0.5,
                margin: float = 16.0):
    """Infimum of |Q'| over supp psi_k intersected with {xi - xi0 in supp psi_l}.

    Returns None (a skip signal) when the intersection is empty: the
    corresponding term contributes nothing to the annulus sum.  Otherwise
    returns the infimum and its ratio to |t| 2^{l - (2-alpha) k}.
    """
    if "I2" not in _ray_sets(k, t, x, alpha, margin):
        raise ParameterError(f"k = {k} is not in I2 for (t, x) = ({t}, {x})")
    xi0 = stationary_point(t, x, alpha)
    if xi0 is None:
        raise ParameterError("no stationary point for this (t, x)")
    shifted = [(xi0 + a, xi0 + b) for (a, b) in _annulus_intervals(l)]
    pieces = _intersect(_annulus_intervals(k), shifted)
    if not pieces:
        return None
    inf = _min_abs_dq(pieces, t, x, alpha)
    bound = abs(t) * 2.0 ** (l - (2.0 - alpha) * k)
    return BoundedValue(inf, inf / bound)


def choose_l0(k: int, t: float, alpha: float) -> int:
    """2^{l0} ~ 2^{(2-alpha)k/2} / |t|^{1/2}, realized by rounding the exponent."""
    return round((2.0 - alpha) * k / 2.0 - 0.5 * math.log2(abs(t)))


_DEFAULT_BUMP = make_bump()


def annulus_decomposition(phi: SampledFunction, k: int, t: float, x: float,
                          alpha: float = 0.5, bump: BumpFunction = _DEFAULT_BUMP,
                          amp: SpectralAmplitude | None = None,
                          margin: float = 16.0) -> list:
    """Stationary-phase splitting of the band-k oscillatory integral.

    Returns [("center", magnitude), (l0+1, magnitude), ...]: the piece within
    distance ~2^{l0} of the stationary point, then dyadic annuli around it.
    The l-sum truncates at the first empty intersection, which happens once
    2^{l-1} exceeds the diameter of supp psi_k around xi0 (finite by
    construction, no artificial cap).  The complex pieces telescope back to
    the undecomposed integral exactly.
    """
    xi0 = stationary_point(t, x, alpha)
    if xi0 is None:
        raise ParameterError("no stationary point: annulus decomposition undefined")
    if amp is None:
        amp = SpectralAmplitude(
            SpectralFunction(phi.grid, _forward_raw(phi.grid, phi.values))
        )
    l0 = choose_l0(k, t, alpha)
    band = _intersect(_annulus_intervals(k), amp.support)
    if not band:
        return [("center", 0.0)]
    scale = min(8.0 * amp.xi_spacing, 2.0**k / 8.0)
    out = []

    def window_center(xi):
        return amp(xi) * bump.dyadic_piece(xi, k) * bump((xi - xi0) / 2.0**l0)

    center_band = _intersect(
        band, [(xi0 - 2.0 ** (l0 + 1), xi0 + 2.0 ** (l0 + 1))]
    )
    val = oscillatory_integral(window_center, center_band, t, x, alpha,
                               amp_scale=min(scale, 2.0**l0 / 4.0)) \
        if center_band else 0.0j
    out.append(("center", abs(val) / (2.0 * np.pi)))
    reach = 2.0 ** (k + 1) + abs(xi0)
    l = l0 + 1
    while 2.0 ** (l - 1) <= reach:
        shifted = [(xi0 + a, xi0 + b) for (a, b) in _annulus_intervals(l)]
        pieces = _intersect(band, shifted)
        if pieces:
            def window_l(xi, _l=l):
                return amp(xi) * bump.dyadic_piece(xi, k) * bump.dyadic_piece(xi - xi0, _l)

            val = oscillatory_integral(window_l, pieces, t, x, alpha,
                                       amp_scale=min(scale, 2.0**l / 4.0))
            out.append((l, abs(val) / (2.0 * np.pi)))
        l += 1
    return out


@dataclass(frozen=True)
class ProofTrace:
    """All traced magnitudes at one (t, x), with their bound ratios."""

    partition: BandPartition
    u_value: complex
    reconstruction_defect: float
    piece_mags: dict
    memberships: dict
    low_mag: float
    term_A: float
    term_B1: float
    term_B2: float
    term_B3: float
    term_C: float
    ratio_A: float
    ratio_B1: float
    ratio_B2: float
    ratio_B3: float
    ratio_C: float
    s_choice: float
    l0_choices: dict = field(default_factory=dict)
    q0_map: dict = field(default_factory=dict)
    annuli: dict = field(default_factory=dict)


def trace_terms(phi: SampledFunction, t: float, x: float, alpha: float = 0.5,
                margin: float = 16.0, bump: BumpFunction = _DEFAULT_BUMP,
                with_annuli: bool = True) -> ProofTrace:
    """Compute |P_k u(t, x)| for every active band and aggregate the proof terms.

    Each aggregate is reported as (term value) / (right side of its bound):
    finite, recorded ratios standing in for the implicit absolute constants.
    """
    if t == 0.0:
        raise ParameterError("t must be nonzero")
    part = build_partition(t, x, alpha, margin)
    hat = _forward_raw(phi.grid, phi.values)
    amp = SpectralAmplitude(SpectralFunction(phi.grid, hat))
    if not amp.support:
        zero = BoundedValue(0.0, 0.0)
        return ProofTrace(
            partition=part, u_value=0.0j, reconstruction_defect=0.0,
            piece_mags={}, memberships={}, low_mag=0.0,
            term_A=0.0, term_B1=0.0, term_B2=0.0, term_B3=0.0, term_C=0.0,
            ratio_A=zero.ratio, ratio_B1=0.0, ratio_B2=0.0, ratio_B3=0.0,
            ratio_C=0.0, s_choice=(2.0 - alpha) / 2.0,
        )
    abs_xi = np.abs(phi.grid.xi)
    peak = np.max(np.abs(hat))
    active = []
    for k in _K_SCAN:
        if 2.0 ** (k + 1) > phi.grid.nyquist:
            break
        sel = (abs_xi > 2.0 ** (k - 1)) & (abs_xi < 2.0 ** (k + 1))
        if np.any(sel) and np.max(np.abs(hat[sel])) > 1e-13 * peak:
            active.append(k)
    if not active:
        active = [0]
    k_lo = min(active)

    scale8 = 8.0 * amp.xi_spacing
    pieces_c = {}
    for k in active:
        def piece_amp(xi, _k=k):
            return amp(xi) * bump.dyadic_piece(xi, _k)

        band = _intersect(_annulus_intervals(k), amp.support)
        val = oscillatory_integral(
            piece_amp, band, t, x, alpha,
            amp_scale=min(scale8, 2.0**k / 8.0),
        ) if band else 0.0j
        pieces_c[k] = val / (2.0 * np.pi)

    def low_amp(xi):
        return amp(xi) * bump(xi / 2.0 ** (k_lo - 1))

    low_band = _intersect([(-(2.0**k_lo), 0.0 - amp.xi_spacing * 0.25),
                           (amp.xi_spacing * 0.25, 2.0**k_lo)], amp.support)
    low_c = oscillatory_integral(low_amp, low_band, t, x, alpha,
                                 amp_scale=min(scale8, 2.0**k_lo / 8.0)) / (2.0 * np.pi) \
        if low_band else 0.0j

    u_val = oscillatory_integral(amp, amp.support, t, x, alpha,
                                 amp_scale=scale8) / (2.0 * np.pi)
    recon = low_c + sum(pieces_c.values())
    defect = abs(recon - u_val)

    mags = {k: abs(v) for k, v in pieces_c.items()}
    members = {k: part.membership(k) for k in active}

    term_A = abs(low_c) + sum(m for k, m in mags.items() if k <= part.a_max_k)
    term_B1 = sum(m for k, m in mags.items() if k in part.I1)
    term_B2 = sum(m for k, m in mags.items() if k in part.I2)
    term_B3 = sum(m for k, m in mags.items() if k in part.I3)
    term_C = sum(m for k, m in mags.items() if k >= part.c_min_k)

    l2 = l2_norm_physical(phi)
    w = weighted_norm(phi)
    h1 = hs_norm(phi, 1.0)
    s_choice = (2.0 - alpha) / 2.0
    hs = hs_norm(phi, s_choice)
    at = abs(t)
    lw = l2 + w
    b2_rate = at**-0.5 + at ** ((2.0 - 3.0 * alpha) / 4.0 - 0.75)

    ratio_A = term_A / ((1.0 + at) ** -0.5 * l2) if l2 > 0 else 0.0
    ratio_B1 = term_B1 * at / (math.log1p(at) * lw) if lw > 0 else 0.0
    ratio_B2 = term_B2 / (b2_rate * (hs + w)) if (hs + w) > 0 else 0.0
    ratio_B3 = term_B3 * at**0.5 / lw if lw > 0 else 0.0
    ratio_C = term_C / ((1.0 + at) ** -0.5 * h1) if h1 > 0 else 0.0

    l0s, q0s, annuli = {}, {}, {}
    if with_annuli and not part.flagged:
        for k in part.I2:
            if k not in active:
                continue
            l0s[k] = choose_l0(k, t, alpha)
            annuli[k] = annulus_decomposition(
                phi, k, t, x, alpha, bump=bump, amp=amp, margin=margin
            )
            for (l, _m) in annuli[k]:
                if l == "center":
                    continue
                est = q0_estimate(k, l, t, x, alpha, margin)
                if est is not None:
                    q0s[(k, l)] = est

    return ProofTrace(
        partition=part, u_value=u_val, reconstruction_defect=defect,
        piece_mags=mags, memberships=members, low_mag=abs(low_c),
        term_A=term_A, term_B1=term_B1, term_B2=term_B2, term_B3=term_B3,
        term_C=term_C, ratio_A=ratio_A, ratio_B1=ratio_B1, ratio_B2=ratio_B2,
        ratio_B3=ratio_B3, ratio_C=ratio_C, s_choice=s_choice,
        l0_choices=l0s, q0_map=q0s, annuli=annuli,
    )
