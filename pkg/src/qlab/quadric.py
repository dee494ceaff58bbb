"""Pointwise geometry of the complex quadric.

A point of the m-dimensional complex quadric is represented by a
horizontal lift z = u + iv in C^{m+2} with |u| = |v| = 1/sqrt(2) and
u . v = 0 (equivalently |z| = 1 and sum_i z_i^2 = 0).  The horizontal
tangent space at z is

    T_z = { w in C^{m+2} : <w, z> = 0  and  sum_i z_i w_i = 0 },

a real 2m-dimensional subspace closed under multiplication by i.  The
complex structure J is that multiplication.  The real structures form a
circle A_theta(w) = e^{i theta} * conj(w); each A_theta is a g-symmetric
anti-holomorphic involution of T_z.  The Riemannian curvature tensor of
the quadric is assembled from g, J and any one A_theta, and does not
depend on which theta is used.

Vectors are plain complex numpy arrays; the real metric is
g(x, y) = Re <x, y>.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np

from ._eig import jacobi_eigh

CONSTRAINT_TOL = 1e-10
SINGULAR_TOL = 1e-8


def default_rng(seed: int | None = None) -> np.random.Generator:
    """Generator seeded from the argument, else QLAB_SEED, else 0."""
    if seed is None:
        seed = int(os.environ.get("QLAB_SEED", "0"))
    return np.random.default_rng(seed)


def g(x: np.ndarray, y: np.ndarray) -> float:
    """Real part of the Hermitian inner product."""
    return float(np.real(np.vdot(y, x)))


def herm(x: np.ndarray, y: np.ndarray) -> complex:
    """Hermitian inner product <x, y> = sum_i x_i * conj(y_i)."""
    return complex(np.vdot(y, x))


def apply_J(w: np.ndarray) -> np.ndarray:
    """Complex structure: multiplication by i."""
    return 1j * w


def apply_A(w: np.ndarray, theta: float = 0.0) -> np.ndarray:
    """Real structure at phase theta: w -> e^{i theta} * conj(w)."""
    return np.exp(1j * theta) * np.conj(w)


@dataclass(frozen=True)
class QuadricPoint:
    """A horizontal lift of a quadric point, with its dimension m."""

    z: np.ndarray
    m: int

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.complex128)
        object.__setattr__(self, "z", z)
        if z.shape != (self.m + 2,):
            raise ValueError(f"expected a vector of length m+2 = {self.m + 2}")
        if abs(np.linalg.norm(z) - 1.0) > CONSTRAINT_TOL:
            raise ValueError("lift is not unit length")
        if abs(np.sum(z * z)) > CONSTRAINT_TOL:
            raise ValueError("lift does not satisfy the quadric equation")

    @property
    def u(self) -> np.ndarray:
        return self.z.real

    @property
    def v(self) -> np.ndarray:
        return self.z.imag

    def constraint_normals(self) -> np.ndarray:
        """g-orthonormal normals of T_z inside C^{m+2}: z, iz, conj z, i conj z."""
        z = self.z
        return np.stack([z, 1j * z, np.conj(z), 1j * np.conj(z)])

    def project_tangent(self, w: np.ndarray) -> np.ndarray:
        """g-orthogonal projection of an ambient vector onto T_z."""
        out = np.asarray(w, dtype=np.complex128).copy()
        for n in self.constraint_normals():
            out = out - g(out, n) * n
        return out

    def tangent_residual(self, w: np.ndarray) -> float:
        """How far w is from satisfying both tangency constraints."""
        return max(abs(herm(w, self.z)), abs(np.sum(self.z * w)))


def make_point(raw: np.ndarray, normalize: bool = True) -> QuadricPoint:
    """Build a quadric point from a raw complex vector.

    With ``normalize`` the real and imaginary parts are Gram-Schmidt
    orthogonalized and rescaled to a valid lift (u . v = 0, both of norm
    1/sqrt(2)); otherwise the constraints are checked as given.
    """
    z = np.asarray(raw, dtype=np.complex128)
    if z.ndim != 1 or z.size < 3:
        raise ValueError("need a complex vector of length at least 3")
    m = z.size - 2
    if not normalize:
        return QuadricPoint(z, m)
    u = z.real.astype(np.float64)
    v = z.imag.astype(np.float64)
    nu = np.linalg.norm(u)
    if nu < 1e-12:
        raise ValueError("real part vanishes; cannot normalize")
    u = u / nu
    v = v - (v @ u) * u
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        raise ValueError("imaginary part is parallel to the real part")
    v = v / nv
    return QuadricPoint((u + 1j * v) / np.sqrt(2.0), m)


def random_point(m: int, rng: np.random.Generator | None = None) -> QuadricPoint:
    rng = rng or default_rng()
    raw = rng.standard_normal(m + 2) + 1j * rng.standard_normal(m + 2)
    return make_point(raw)


def tangent_frame(pt: QuadricPoint) -> np.ndarray:
    """Deterministic g-orthonormal basis of T_z, shape (2m, m+2).

    Standard basis vectors e_k and i e_k are projected onto the tangent
    space in a fixed order and run through modified Gram-Schmidt with one
    re-orthogonalization pass; near-dependent candidates are dropped.
    """
    n = pt.m + 2
    frame: list[np.ndarray] = []
    for k in range(n):
        for mult in (1.0, 1j):
            cand = np.zeros(n, dtype=np.complex128)
            cand[k] = mult
            w = pt.project_tangent(cand)
            for b in frame:
                w = w - g(w, b) * b
            for b in frame:
                w = w - g(w, b) * b
            norm = np.linalg.norm(w)
            if norm > 1e-8:
                frame.append(w / norm)
            if len(frame) == 2 * pt.m:
                return np.stack(frame)
    raise RuntimeError("tangent frame construction fell short")


def random_tangent(pt: QuadricPoint, rng: np.random.Generator | None = None,
                   unit: bool = True) -> np.ndarray:
    rng = rng or default_rng()
    n = pt.m + 2
    w = pt.project_tangent(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    if unit:
        w = w / np.linalg.norm(w)
    return w


def curvature(X: np.ndarray, Y: np.ndarray, Z: np.ndarray,
              theta: float = 0.0) -> np.ndarray:
    """Curvature tensor R(X, Y)Z of the quadric on tangent vectors.

    Nine terms: the round part, the Kaehler part built from J, and the
    real-structure part built from A = A_theta.  The value is independent
    of theta whenever X, Y, Z are tangent at a common point.
    """
    JX, JY, JZ = 1j * X, 1j * Y, 1j * Z
    AX, AY = apply_A(X, theta), apply_A(Y, theta)
    JAX, JAY = 1j * AX, 1j * AY
    return (g(Y, Z) * X - g(X, Z) * Y
            + g(JY, Z) * JX - g(JX, Z) * JY - 2.0 * g(JX, Y) * JZ
            + g(AY, Z) * AX - g(AX, Z) * AY
            + g(JAY, Z) * JAX - g(JAX, Z) * JAY)


def normal_jacobi_matrix(pt: QuadricPoint, N: np.ndarray,
                         frame: np.ndarray | None = None) -> np.ndarray:
    """Matrix of X -> R(X, N)N in a tangent frame (symmetric, 2m x 2m)."""
    if frame is None:
        frame = tangent_frame(pt)
    k = frame.shape[0]
    out = np.empty((k, k))
    images = [curvature(f, N, N) for f in frame]
    for i in range(k):
        for j in range(k):
            out[i, j] = g(images[j], frame[i])
    return 0.5 * (out + out.T)


def normal_jacobi_spectrum(pt: QuadricPoint, N: np.ndarray) -> np.ndarray:
    w, _ = jacobi_eigh(normal_jacobi_matrix(pt, N))
    return w


class SingularType(enum.Enum):
    A_ISOTROPIC = "A-isotropic"
    A_PRINCIPAL = "A-principal"
    GENERIC = "generic"


def singular_type(w: np.ndarray, tol: float = SINGULAR_TOL,
                  sweep: int = 720) -> SingularType:
    """Classify a unit vector against the circle of real structures.

    The invariant is tau = sum_i w_i^2, with |tau| in [0, 1] for unit w.
    |tau| ~ 0 means w is g-orthogonal to A_theta w for every theta
    (A-isotropic); |tau| ~ 1 means some A_theta fixes w (A-principal).
    The modulus test is cross-checked against a theta sweep of the
    defining conditions, and the two must agree.
    """
    w = np.asarray(w, dtype=np.complex128)
    norm = np.linalg.norm(w)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError("classification needs a unit vector")
    tau = complex(np.sum(w * w))
    t = abs(tau)
    if t <= tol:
        verdict = SingularType.A_ISOTROPIC
    elif abs(t - 1.0) <= tol:
        verdict = SingularType.A_PRINCIPAL
    else:
        verdict = SingularType.GENERIC
    # definitional sweep: max_theta |g(A_theta w, w)| and min_theta |A_theta w - w|
    thetas = np.linspace(0.0, 2.0 * np.pi, sweep, endpoint=False)
    pairings = np.abs(np.real(np.exp(1j * thetas) * np.conj(tau)))
    max_pairing = float(pairings.max())
    # |A_theta w - w|^2 = 2 - 2 Re(e^{i theta} conj(tau)) is minimized at
    # theta = arg(tau); evaluate the fixed-vector residual there exactly
    best_theta = float(np.angle(tau)) if t > 0 else 0.0
    fix_residual = float(np.linalg.norm(apply_A(w, best_theta) - w))
    sweep_says_isotropic = max_pairing <= tol
    sweep_says_principal = fix_residual <= np.sqrt(2 * tol)
    agree = {
        SingularType.A_ISOTROPIC: sweep_says_isotropic,
        SingularType.A_PRINCIPAL: sweep_says_principal,
        SingularType.GENERIC: not sweep_says_isotropic and not sweep_says_principal,
    }[verdict]
    if not agree:
        raise ArithmeticError(
            f"modulus test ({verdict.value}, |tau|={t:.3e}) disagrees with the "
            f"theta sweep (pairing max {max_pairing:.3e}, fix residual {fix_residual:.3e})")
    return verdict
