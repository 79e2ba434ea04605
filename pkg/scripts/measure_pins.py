"""Re-measure every regression-pinned constant on the default configurations.

Prints full-precision (17 significant digit) values in the layout used by
``dispersive_decay/pins.py``.  Run after any intended behavior change, diff
the output against the frozen values, and update the module only when the
change is understood.
"""

import time

from dispersive_decay.harness import (
    SuiteConfig,
    run_decay,
    run_lemma_suites,
    run_trace_ratio_suite,
    tracer_constant_suite,
)


def g(v: float) -> str:
    return format(v, ".17g")


def main() -> None:
    t0 = time.time()

    print("DECAY_MAX_RATIO = {")
    for seed in (0, 1):
        for alpha in (0.35, 0.4, 0.45, 0.5):
            cfg = SuiteConfig(seed=seed, alpha=alpha)
            reports = run_decay(cfg)
            worst = max(max(r.ratios) for r in reports)
            print(f"    ({seed}, {alpha}): {g(worst)},", flush=True)
    print("}")
    print(f"# decay sweep: {time.time() - t0:.1f}s", flush=True)

    t1 = time.time()
    table = run_lemma_suites(SuiteConfig(seed=0, n_samples=100))
    print("LEMMA_SUITE_MAXIMA = {")
    for row in table:
        print(f'    "{row["check"]}": {g(row["max"])},')
    print("}")
    print(f"# lemma suites: {time.time() - t1:.1f}s", flush=True)

    t2 = time.time()
    maxima = run_trace_ratio_suite(SuiteConfig(seed=0, n_samples=10))
    print("TRACE_RATIO_MAXIMA = {")
    for name, v in maxima.items():
        print(f'    "{name}": {g(v)},')
    print("}")
    print(f"# trace ratios: {time.time() - t2:.1f}s", flush=True)

    t3 = time.time()
    print("Q0_LOWER_CONSTANT = {")
    for alpha in (0.4, 0.5):
        consts = tracer_constant_suite(alpha)
        print(f"    {alpha}: {g(consts['q0'])},")
        if alpha == 0.5:
            kernel = consts["kernel"]
    print("}")
    print(f"KERNEL_LOWER_CONSTANT = {g(kernel)}")
    print(f"# tracer constants: {time.time() - t3:.1f}s")
    print(f"# total: {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
