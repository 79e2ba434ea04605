"""Regression-pinned empirical constants.

The bounds verified by this package all carry implicit absolute constants; the
suites therefore record the empirical maxima observed on the seeded default
configurations, and later runs fail if a maximum grows by more than
``PIN_HEADROOM`` (a genuine regression, not noise: every suite is a
deterministic function of its seed).

Values below were measured on the default configurations (seed 0, and seed 1
for the stability cross-checks) and frozen.  Update them only after verifying
that a change in behavior is intended.
"""

PIN_HEADROOM = 1.01

# run_lemma_suites, default lemma config (seed 0, 100 samples, L = 200, N = 2^17,
# k in [-8, 8]); keys are row names, values the recorded suite maxima
LEMMA_SUITE_MAXIMA = {
    "bern_1_2": 0.44429022822493608,
    "bern_2_4": 0.69992889300685024,
    "bern_2_inf": 0.56568973964486624,
    "bern2_s1_p2": 1.7982564103899634,
    "lemma1": 2.5280586629468367,
    "lemma2_s0.75": 0.81732490915171696,
}

# verify-decay, default decay config (20 samples, band [0.25, 32] clamped to
# the grid, dyadic t <= 2^10): global max of
# R(t) = (1+|t|)^{1/2} sup / (H^1 + weighted), keyed by (seed, alpha)
DECAY_MAX_RATIO = {
    (0, 0.35): 0.32121522545440551,
    (0, 0.4): 0.30058217096036338,
    (0, 0.45): 0.28511159290881871,
    (0, 0.5): 0.27256064498879357,
    (1, 0.35): 0.22308365764468846,
    (1, 0.4): 0.21054058586049446,
    (1, 0.45): 0.19546306772435848,
    (1, 0.5): 0.18612079606570775,
}

# analytic sharp Sobolev embedding constant: sup|f| <= 2^{-1/2} ||f||_{H^1};
# the empirical suites must sit below it (this one cannot drift with samples)
EMBEDDING_CONSTANT = 0.7071067811865476

# proof tracer, 10-sample suite at t in {2^11, 2^12, 2^13}, observed on each
# sample's dominant stationary ray and at rays 8x faster/slower: max over the
# suite of each bound ratio.  B3 is structurally zero here: for these times
# the middle band holds only a few annuli and no physical observer ray makes
# them fast enough for the far-from-stationary high-frequency regime, so the
# regression check treats a zero pin as "stay at the numerical floor".
TRACE_RATIO_MAXIMA = {
    "A": 6.450828230937397e-07,
    "B1": 2.97029779320512e-09,
    "B2": 0.24163365401586082,
    "B3": 0.0,
    "C": 0.822022449156651,
}

# q0 infimum / (|t| 2^{l-(2-alpha)k}) minima over the deterministic ray sweep
# (tracer_constant_suite); lower bounds, so suites fail if a value falls below
# pin / PIN_HEADROOM
Q0_LOWER_CONSTANT = {
    0.4: 0.10398833423176462,
    0.5: 0.091751709536136979,
}

# kernel lower bound ratio minimum over the I1/I3 ray sweep at alpha = 1/2
KERNEL_LOWER_CONSTANT = 0.3379283905932738
