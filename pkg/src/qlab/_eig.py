"""Symmetric eigensolver built on cyclic Jacobi rotations.

The numeric geometry layer feeds small dense symmetric matrices (shape
operators, normal Jacobi operators, Gram matrices) through this module.
Sizes stay tiny (n <= ~30), so a Jacobi sweep loop beats LAPACK setup cost
and gives a convergence certificate: iteration stops only once every
off-diagonal entry is below an absolute threshold.

Two interchangeable kernels exist.  The default is compiled with numba's
``@njit``; a pure-numpy fallback covers interpreters without numba.  The
environment variable ``QLAB_BACKEND`` picks one explicitly ("numba" or
"numpy"); anything else, or leaving it unset, selects numba when it is
importable.  ``benchmarks/bench_eig.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


OFFDIAG_TOL = 1e-13
MAX_SWEEPS = 100


def _jacobi_cycle(a, v, n):
    """One cyclic sweep of Jacobi rotations over all (p, q) pairs.

    Mutates ``a`` (symmetric working copy) and ``v`` (accumulated
    rotations) in place.  Shared verbatim by both backends; the numba
    variant is this exact function pushed through ``njit``.
    """
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            diff = a[q, q] - a[p, p]
            if abs(apq) < 1e-300:
                continue
            theta = diff / (2.0 * apq)
            if theta >= 0.0:
                t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
            else:
                t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            tau = s / (1.0 + c)
            app = a[p, p]
            aqq = a[q, q]
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0
            for k in range(n):
                if k != p and k != q:
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp - s * (akq + tau * akp)
                    a[p, k] = a[k, p]
                    a[k, q] = akq + s * (akp - tau * akq)
                    a[q, k] = a[k, q]
            for k in range(n):
                vkp = v[k, p]
                vkq = v[k, q]
                v[k, p] = vkp - s * (vkq + tau * vkp)
                v[k, q] = vkq + s * (vkp - tau * vkq)


def _max_offdiag(a, n):
    m = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            x = abs(a[p, q])
            if x > m:
                m = x
    return m


def _jacobi_numpy(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    sweeps = 0
    while sweeps < max_sweeps:
        if _max_offdiag(a, n) <= tol:
            break
        _jacobi_cycle(a, v, n)
        sweeps += 1
    return a, v, sweeps


_jacobi_cycle_jit = njit(cache=True)(_jacobi_cycle)
_max_offdiag_jit = njit(cache=True)(_max_offdiag)


@njit(cache=True)
def _jacobi_numba(a, tol, max_sweeps):  # pragma: no cover - compiled path
    n = a.shape[0]
    v = np.eye(n)
    sweeps = 0
    while sweeps < max_sweeps:
        if _max_offdiag_jit(a, n) <= tol:
            break
        _jacobi_cycle_jit(a, v, n)
        sweeps += 1
    return a, v, sweeps


def active_backend() -> str:
    """Resolve the kernel choice from QLAB_BACKEND at call time."""
    choice = os.environ.get("QLAB_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not NUMBA_AVAILABLE:
            raise RuntimeError("QLAB_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if NUMBA_AVAILABLE else "numpy"


def jacobi_eigh(mat, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues and eigenvectors of a real symmetric matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and eigenvectors in
    the columns of ``v``.  Convergence means every off-diagonal entry of
    the rotated matrix is at most ``tol`` times the scale of the input
    (scale = max absolute entry, floored at 1), so the returned values come
    with an explicit diagonality certificate.

    Raises ``RuntimeError`` when the sweep budget runs out, which for the
    matrix sizes used here indicates a non-symmetric input.
    """
    a = np.asarray(mat, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    if n == 0:
        return np.empty(0), np.empty((0, 0))
    if not np.allclose(a, a.T, atol=1e-10 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    work = 0.5 * (a + a.T)
    scale = max(1.0, float(np.abs(work).max()))
    abs_tol = tol * scale
    if active_backend() == "numba":
        d, v, sweeps = _jacobi_numba(work, abs_tol, max_sweeps)
    else:
        d, v, sweeps = _jacobi_numpy(work, abs_tol, max_sweeps)
    if sweeps >= max_sweeps and _max_offdiag(d, n) > abs_tol:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.diag(d).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def offdiag_residual(mat, w, v) -> float:
    """Max off-diagonal entry of v^T A v, the diagonality certificate."""
    a = np.asarray(mat, dtype=np.float64)
    r = v.T @ (0.5 * (a + a.T)) @ v
    np.fill_diagonal(r, 0.0)
    return float(np.abs(r).max())
