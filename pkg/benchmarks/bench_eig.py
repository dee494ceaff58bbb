"""Timing comparison of the Jacobi eigensolver backends.

Runs the same batch of symmetric matrices through the numba kernel and
the pure-numpy fallback, printing per-call times and the speedup.  LAPACK
(numpy.linalg.eigh) is included as a reference point.

Usage: python benchmarks/bench_eig.py [n ...]
"""

import sys
import time

import numpy as np

from qlab._eig import NUMBA_AVAILABLE, jacobi_eigh


def bench(backend, mats, repeats=5):
    import os

    os.environ["QLAB_BACKEND"] = backend
    jacobi_eigh(mats[0])  # warm up (JIT compile / cache load)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for a in mats:
            jacobi_eigh(a)
        best = min(best, time.perf_counter() - t0)
    return best / len(mats)


def bench_lapack(mats, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for a in mats:
            np.linalg.eigh(a)
        best = min(best, time.perf_counter() - t0)
    return best / len(mats)


def main():
    sizes = [int(s) for s in sys.argv[1:]] or [4, 8, 12, 16, 24]
    rng = np.random.default_rng(0)
    print(f"{'n':>4} {'numpy (us)':>12} {'numba (us)':>12} {'lapack (us)':>12} {'speedup':>8}")
    for n in sizes:
        mats = []
        for _ in range(200):
            m = rng.standard_normal((n, n))
            mats.append(0.5 * (m + m.T))
        t_np = bench("numpy", mats)
        t_la = bench_lapack(mats)
        if NUMBA_AVAILABLE:
            t_nb = bench("numba", mats)
            print(f"{n:>4} {t_np*1e6:>12.1f} {t_nb*1e6:>12.1f} {t_la*1e6:>12.1f} {t_np/t_nb:>7.1f}x")
        else:
            print(f"{n:>4} {t_np*1e6:>12.1f} {'n/a':>12} {t_la*1e6:>12.1f} {'n/a':>8}")


if __name__ == "__main__":
    main()
