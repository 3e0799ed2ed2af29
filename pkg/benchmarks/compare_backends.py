#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Runs the two hot kernels (Poisson counting paths, OU sample paths) and one
full table experiment under each backend, reports wall times and the
largest deviation between the backends' outputs.  The kernels consume
identical random words, so outputs agree up to at most ulp-level libm
differences.

    python benchmarks/compare_backends.py [--quick]
"""

import argparse
import time

import numpy as np

from stochpred import _kernels, set_backend
from stochpred.config import parse_config_text
from stochpred.cli import preset_text
from stochpred.harness import run_experiment


def _time(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = parser.parse_args()

    n_poisson = 20_000 if args.quick else 100_000
    n_ou = 2_000 if args.quick else 10_000
    ou_steps = 500 if args.quick else 2_000
    times = np.arange(1.0, 102.0, 2.5)

    cfg = parse_config_text(preset_text("table3"))
    if args.quick:
        import dataclasses
        cfg = dataclasses.replace(cfg, replicates=1000)

    cases = {
        "poisson_counts (N=%d, %d windows)" % (n_poisson, times.size):
            lambda: _kernels.poisson_counts(42, n_poisson, 1.0, times),
        "ou_paths (N=%d, %d steps)" % (n_ou, ou_steps):
            lambda: _kernels.ou_paths(42, n_ou, 5.0, 1.0, 0.1, ou_steps),
        "bench table3 (N=%d)" % cfg.replicates:
            lambda: run_experiment(cfg),
    }

    print(f"{'case':45s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s} {'max|diff|':>10s}")
    for name, fn in cases.items():
        set_backend("numba")
        fn()  # JIT warm-up outside the timed region
        t_nb, out_nb = _time(fn)
        set_backend("numpy")
        t_np, out_np = _time(fn)
        set_backend("numba")
        if hasattr(out_nb, "rows"):
            a = np.array([[r.pred_err, r.est_err] for r in out_nb.rows])
            b = np.array([[r.pred_err, r.est_err] for r in out_np.rows])
        else:
            a, b = np.asarray(out_nb, dtype=np.float64), np.asarray(out_np, dtype=np.float64)
        diff = float(np.max(np.abs(a - b)))
        print(f"{name:45s} {t_nb:9.3f}s {t_np:9.3f}s {t_np / t_nb:7.1f}x {diff:10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
