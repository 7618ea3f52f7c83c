"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported side by side, checked for agreement on every
workload and timed with ``timeit`` (best of N).
"""
import argparse
import timeit

import numpy as np

from hznlib import _kernels_py as py

try:
    from hznlib import _kernels as cy
except ImportError:  # extension not built
    cy = None


def workloads():
    X = np.linspace(0.3, 14.0, 64) + 0.2j
    N = np.full(64, 40, dtype=np.int64)
    vals = np.exp(-np.linspace(0, 5, 20000)) * (1 + 0.5j)
    s = np.arange(2.0, 12.0)
    return {
        "lerch_direct (64 x 40 terms)": lambda m: m.lerch_direct(0.37, X, N, 3),
        "phase_power_block (10 orders x 5000)": lambda m: m.phase_power_block(0.37, 100, 5000, s),
        "phased_sum (20000 terms)": lambda m: m.phased_sum(0.37, vals, 0),
        "form_rows (256 rows x 512)": lambda m: m.form_rows(3.3, 0.2, 2, 0.37, 256, 512),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    print(f"{'kernel':40s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in workloads().items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=a.repeat)) * 1e3
        if cy is None:
            print(f"{name:40s} {tp:10.3f} {'n/a':>10s}")
            continue
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=a.repeat)) * 1e3
        diff = float(np.max(np.abs(np.asarray(fn(py)) - np.asarray(fn(cy)))))
        print(f"{name:40s} {tp:10.3f} {tc:10.3f} {tp / tc:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
