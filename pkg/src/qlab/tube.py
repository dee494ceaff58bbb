"""Tube and parallel-hypersurface calculus via closed-form Jacobi fields.

Along a unit-speed geodesic gamma leaving a base manifold, the shape
operator of the tube or parallel hypersurface at radius r solves the
matrix Jacobi equation D'' + R_N D = 0, with R_N the normal Jacobi
operator.  Because every construction here has R_N commuting with the
initial conditions, each curvature eigenvalue kappa evolves by a scalar
closed form:

    tangent class (D = 1, D' = -s at r = 0):
        y(r) = cos(sqrt(k) r) - (s/sqrt(k)) sin(sqrt(k) r)   (k > 0)
        y(r) = 1 - s r                                       (k = 0)
    normal class (D = 0, D' = 1 at r = 0):
        y(r) = sin(sqrt(k) r)/sqrt(k)                        (k > 0)
        y(r) = r                                             (k = 0)

The principal curvature of the displaced hypersurface is y'(r)/y(r) with
respect to the inward normal -gamma'(r), and -y'(r)/y(r) with respect to
the outward normal gamma'(r).  A zero of y is a focal point; evaluation
inside a guard band around it raises ``FocalPointError``.

For hypersurfaces with A-isotropic normal the curvature classes are
kappa = 1 on the maximal holomorphic part, kappa = 4 on the Reeb line and
kappa = 0 on Span{A N, A xi}, and the per-class displacement maps become
rational functions of tan(r).  Those maps, and the focal-set spectra they
degenerate to, are implemented generically so they run on floats and on
exact scalars alike.

The configuration-level operations (``parallel_config``,
``mean_curvature``, ``focal_data``) take any object with fields
``alpha``, ``m`` and ``classes``, where each class entry is either a
``(value, multiplicity)`` pair on the maximal holomorphic part, or an
object with ``value``, ``multiplicity`` and ``role`` attributes (role
one of "reeb", "kernel", "q").  When no roles are given, the Reeb value
``alpha`` and the two flat kernel directions are implied.

Sign convention of ``parallel_config``: the tube families state their
spectra with the unit normal pointing at the core, and positive
displacement here moves against that normal, so tubes grow: displacing
a tube of radius t by r yields the radius t + r tube.  Negative r moves
along the normal instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._eig import jacobi_eigh

FOCAL_GUARD = 1e-8


class FocalPointError(ArithmeticError):
    """Raised when a displacement lands inside the focal guard band."""


# ----------------------------------------------------------------------
# scalar closed forms


@dataclass(frozen=True)
class TubeClass:
    """One curvature class of the normal Jacobi operator at the base.

    ``kind`` is "tangent" for directions tangent to the base manifold
    (with ``base_eigenvalue`` the shape eigenvalue there) and "normal"
    for directions normal to the base and orthogonal to the geodesic.
    """

    kappa: float
    mult: int
    kind: str
    base_eigenvalue: float = 0.0

    def __post_init__(self):
        if self.kind not in ("tangent", "normal"):
            raise ValueError("kind must be 'tangent' or 'normal'")
        if self.kappa < 0:
            raise ValueError("curvature class must be nonnegative here")


@dataclass(frozen=True)
class TubeSpectrum:
    """Principal curvatures of a displaced hypersurface, with counts.

    ``alpha_r`` is the Reeb value when the source distinguishes one
    (configuration-level displacement) and None for the generic builder;
    ``kernel_mult`` counts flat directions pinned at zero.  ``entries``
    assembles everything into (value, multiplicity) pairs.
    """

    radius: float
    orientation: str
    classes_r: tuple
    alpha_r: object = None
    kernel_mult: int = 0

    @property
    def entries(self) -> tuple:
        out = []
        if self.alpha_r is not None:
            out.append((self.alpha_r, 1))
        if self.kernel_mult:
            out.append((0.0, self.kernel_mult))
        out.extend(self.classes_r)
        return tuple(out)

    def values(self) -> list:
        return [v for v, _ in self.entries]

    def trace(self):
        total = 0
        for v, mult in self.entries:
            total = total + v * mult
        return total

    def dimension(self) -> int:
        return sum(mult for _, mult in self.entries)


def _scalar_entry(kappa: float, kind: str, s: float, r: float) -> tuple[float, float]:
    """(y, y') of the scalar Jacobi solution for one class."""
    if kappa > 0:
        rt = math.sqrt(kappa)
        c, sn = math.cos(rt * r), math.sin(rt * r)
        if kind == "tangent":
            return c - (s / rt) * sn, -rt * sn - s * c
        return sn / rt, c
    if kind == "tangent":
        return 1.0 - s * r, -s
    return r, 1.0


def _orientation_sign(orientation: str) -> float:
    if orientation == "inward":
        return 1.0
    if orientation == "outward":
        return -1.0
    raise ValueError("orientation must be 'inward' or 'outward'")


def jacobi_tube_spectrum(classes: list[TubeClass], r: float,
                         orientation: str = "inward") -> TubeSpectrum:
    """Principal curvatures of the tube of radius r over a base manifold.

    ``orientation`` fixes which unit normal the shape operator refers to:
    "inward" is -gamma'(r) (pointing back at the base), "outward" is
    gamma'(r).  Flipping the orientation negates the spectrum.
    """
    sign = _orientation_sign(orientation)
    entries = []
    for cls in classes:
        y, yp = _scalar_entry(cls.kappa, cls.kind, cls.base_eigenvalue, r)
        if abs(y) <= FOCAL_GUARD:
            raise FocalPointError(
                f"radius {r} is within the guard band of a focal point "
                f"(class kappa={cls.kappa}, kind={cls.kind})")
        entries.append((sign * yp / y, cls.mult))
    return TubeSpectrum(radius=r, orientation=orientation,
                        classes_r=tuple(entries))


# ----------------------------------------------------------------------
# displacement maps for A-isotropic Hopf configurations, rational in tan r


def _is_exact(x) -> bool:
    return hasattr(x, "sign") and hasattr(x, "inverse")


def _guard_zero(x) -> bool:
    if _is_exact(x):
        return x.is_zero()
    return abs(x) <= FOCAL_GUARD


def displace_q_eigenvalue(lam, tan_r):
    """Displacement of a kappa = 1 eigenvalue by radius r along the normal.

    cot-shift map: lambda = cot(theta) goes to cot(theta - r), written as
    a rational function of t = tan(r) so exact scalars pass through.
    """
    den = 1 - lam * tan_r
    if _guard_zero(den):
        raise FocalPointError("q-class eigenvalue hits a focal point")
    return (tan_r + lam) / den


def displace_reeb_eigenvalue(alpha, tan_r):
    """Displacement of the Reeb eigenvalue (kappa = 4 class) along the normal."""
    one = alpha - alpha + 1 if _is_exact(alpha) else 1.0
    den2 = one - tan_r * tan_r
    if _guard_zero(den2):
        raise FocalPointError("tan(2r) undefined at this radius")
    tan_2r = 2 * tan_r / den2
    den = one - alpha * tan_2r / 2
    if _guard_zero(den):
        raise FocalPointError("Reeb eigenvalue hits a focal point")
    return (2 * tan_2r + alpha) / den


def displace_isotropic(alpha, q_classes, tan_r):
    """Displace an A-isotropic Hopf configuration along its normal.

    ``q_classes`` is a list of (eigenvalue, multiplicity) pairs on the
    maximal holomorphic subspace; ``alpha`` is the Reeb eigenvalue.  The
    two flat directions Span{A N, A xi} stay at eigenvalue 0 and are not
    listed.  The result is with respect to the transported normal.
    Arithmetic is generic: floats and exact scalars both work.
    """
    new_alpha = displace_reeb_eigenvalue(alpha, tan_r)
    new_classes = [(displace_q_eigenvalue(lam, tan_r), mult) for lam, mult in q_classes]
    return new_alpha, new_classes


def _split_config(config):
    """(alpha, q list, kernel multiplicity, m) of a configuration object."""
    normal_type = getattr(config, "normal_type", None)
    if normal_type is not None and getattr(normal_type, "name", str(normal_type)).upper().find("PRINCIPAL") >= 0:
        raise ValueError("displacement calculus requires an A-isotropic normal")
    q, kernel = [], 0
    for entry in config.classes:
        role = getattr(entry, "role", None)
        if role is None:
            v, mult = entry
            q.append((v, mult))
            continue
        if role == "reeb":
            continue
        v, mult = entry.value, entry.multiplicity
        if role == "kernel":
            kernel += mult
        else:
            q.append((v, mult))
    if kernel == 0:
        kernel = 2
    return config.alpha, q, kernel, config.m


def parallel_config(config, r: float) -> TubeSpectrum:
    """Spectrum of the parallel hypersurface at signed distance r.

    Positive r moves against the configured unit normal (growing the
    tube families), negative r moves along it.  The Reeb value follows
    the double-angle rational map, the maximal holomorphic classes the
    single-angle one, and the two flat kernel directions stay at zero.
    Raises ``FocalPointError`` when a displacement denominator vanishes.
    """
    if isinstance(config, TubeSpectrum):
        if config.alpha_r is None:
            raise ValueError("spectrum has no distinguished Reeb value to displace")
        alpha, q, kernel = config.alpha_r, config.classes_r, config.kernel_mult
    else:
        alpha, q, kernel, _ = _split_config(config)
    tan_r = -math.tan(r)
    new_alpha = displace_reeb_eigenvalue(float(alpha), tan_r)
    new_q = tuple((displace_q_eigenvalue(float(lam), tan_r), mult) for lam, mult in q)
    return TubeSpectrum(radius=r, orientation="inward", classes_r=new_q,
                        alpha_r=new_alpha, kernel_mult=kernel)


def mean_curvature(obj, r: float = 0.0):
    """Mean curvature (trace of the shape operator) at displacement r.

    On a ``TubeSpectrum`` with r = 0 this is just the trace.  On a
    configuration it evaluates the closed trigonometric form

        H(r) = sum_i mult_i (lam_i cos r - sin r)/(cos r + lam_i sin r)
             + (alpha cos 2r - 2 sin 2r)/(cos 2r + (alpha/2) sin 2r),

    an independent route from the rational displacement maps.
    """
    if isinstance(obj, TubeSpectrum):
        if r == 0.0:
            return obj.trace()
        tan_r = -math.tan(r)
        total = 0.0
        if obj.alpha_r is not None:
            total += float(displace_reeb_eigenvalue(float(obj.alpha_r), tan_r))
        for lam, mult in obj.classes_r:
            total += mult * float(displace_q_eigenvalue(float(lam), tan_r))
        return total
    alpha, q, _, _ = _split_config(obj)
    c, s = math.cos(r), math.sin(r)
    c2, s2 = math.cos(2.0 * r), math.sin(2.0 * r)
    alpha = float(alpha)
    den = c2 + 0.5 * alpha * s2
    if abs(den) <= FOCAL_GUARD:
        raise FocalPointError("Reeb factor vanishes at this radius")
    total = (alpha * c2 - 2.0 * s2) / den
    for lam, mult in q:
        lam = float(lam)
        den = c + lam * s
        if abs(den) <= FOCAL_GUARD:
            raise FocalPointError("displacement factor vanishes at this radius")
        total += mult * (lam * c - s) / den
    return total


# ----------------------------------------------------------------------
# focal sets of A-isotropic Hopf configurations


@dataclass(frozen=True)
class FocalData:
    """Spectrum and shape of one focal submanifold of a Hopf datum.

    ``distance`` is the signed displacement along the unit normal with
    cot(distance) = lambda_star: positive on the "plus" side, negative
    on the "minus" side.  ``spectrum`` is a merged multiset of
    (value, multiplicity) pairs with respect to the degenerating normal,
    and ``dim`` the dimension of the focal submanifold.
    """

    side: str
    distance: float
    lambda_star: object
    fixed_point_case: bool
    spectrum: tuple
    dim: int
    austere: bool


def _fixed_point_defect(alpha, lam):
    """lam^2 - alpha lam - 1; zero exactly at the Reeb fixed points."""
    return lam * lam - alpha * lam - 1


def _sign_of(x) -> int:
    if _is_exact(x):
        return x.sign()
    if abs(x) <= FOCAL_GUARD:
        return 0
    return 1 if x > 0 else -1


def merge_multiset(entries):
    """Combine (value, multiplicity) pairs whose values coincide.

    Exact values merge on exact equality, floats within the focal guard
    band; order of first appearance is kept.
    """
    merged = []
    for v, mult in entries:
        for i, (w, wm) in enumerate(merged):
            if _sign_of(v - w) == 0:
                merged[i] = (w, wm + mult)
                break
        else:
            merged.append((v, mult))
    return tuple(merged)


def focal_data(config, side: str = "plus") -> FocalData:
    """Spectrum of the focal submanifold on one side of a Hopf datum.

    On the "plus" side the geodesics run along the unit normal until the
    first displacement factor vanishes, at cot(r) equal to the largest
    of the holomorphic eigenvalues and the upper Reeb fixed point
    (alpha + sqrt(alpha^2 + 4))/2; "minus" mirrors this along the
    opposite normal with the lower fixed point.  The surviving values

        0,
        alpha + (4 + alpha^2) L / (L^2 - alpha L - 1)   (strict case only),
        (1 + L lambda_i) / (L - lambda_i)               (non-extremal lambda_i),

    carry multiplicities 2 (flat kernel), 1 (Reeb) and the class counts,
    merged where values coincide.  In the strict case (extremal class
    value beats the fixed point) everything is rational in the inputs;
    in the fixed-point case L itself needs sqrt(alpha^2 + 4), which must
    be exactly representable when exact scalars are used.  Whether the
    extremal class sits at the fixed point is decided radical-free via
    the sign of L^2 - alpha L - 1.
    """
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    branch = +1 if side == "plus" else -1
    alpha, q_classes, kernel, m = _split_config(config)
    if float(alpha) < -FOCAL_GUARD:
        raise ValueError("normalize the configuration to alpha >= 0 first")
    exact = _is_exact(alpha) or any(_is_exact(l) for l, _ in q_classes)
    if not q_classes:
        raise ValueError("need at least one eigenvalue class")
    lams = [l for l, _ in q_classes]
    extremal_q = max(lams, key=float) if branch > 0 else min(lams, key=float)
    # x > (alpha + sqrt(alpha^2+4))/2 iff x^2 - alpha x - 1 > 0 and 2x > alpha,
    # mirrored for the lower fixed point, so no radical is needed to decide
    defect = _fixed_point_defect(alpha, extremal_q)
    side_sign = _sign_of(2 * extremal_q - alpha)
    right_side = side_sign > 0 if branch > 0 else side_sign < 0
    if _sign_of(defect) > 0 and right_side:
        L = extremal_q
        strict = True
    elif _sign_of(defect) == 0 and right_side:
        L = extremal_q
        strict = False
    else:
        L = _reeb_fixed_point(alpha, branch, exact)
        strict = False
    zero = L - L
    collapsed = sum(mult for lam, mult in q_classes if _sign_of(lam - L) == 0)
    entries = [(zero, kernel)]
    if strict:
        entries.append((alpha + (4 + alpha * alpha) * L / _fixed_point_defect(alpha, L), 1))
    for lam, mult in q_classes:
        if _sign_of(lam - L) == 0:
            continue
        entries.append(((1 + L * lam) / (L - lam), mult))
    spectrum = merge_multiset(entries)
    dim = 2 * m - 1 - collapsed - (0 if strict else 1)
    if sum(mult for _, mult in spectrum) != dim:
        raise ArithmeticError("focal multiplicity bookkeeping is inconsistent")
    distance = math.atan(1.0 / float(L))
    return FocalData(side=side, distance=distance, lambda_star=L,
                     fixed_point_case=not strict, spectrum=spectrum, dim=dim,
                     austere=austere_test(spectrum))


def _reeb_fixed_point(alpha, branch, exact):
    """(alpha + branch sqrt(alpha^2 + 4)) / 2, exactly when possible."""
    if exact:
        from .exactnum import exact_sqrt, ratE

        a = alpha if _is_exact(alpha) else ratE(alpha)
        disc = a * a + ratE(4)
        root = exact_sqrt(disc)
        if root is None:
            raise ValueError("sqrt(alpha^2 + 4) is not exactly representable; "
                             "use float inputs or a representable alpha")
        return (a + root) / ratE(2) if branch > 0 else (a - root) / ratE(2)
    s = math.sqrt(alpha * alpha + 4.0)
    return (alpha + s) / 2.0 if branch > 0 else (alpha - s) / 2.0


def austere_test(entries, tol: float = 1e-9) -> bool:
    """Is the curvature multiset invariant under change of sign?

    ``entries`` are (value, multiplicity) pairs; equal values are merged
    first, then every nonzero value needs its negative present with the
    same multiplicity.  Works on floats (up to ``tol``) and on exact
    scalars (exactly).  A failure certifies the configuration is not
    austere; a pass means the multiset alone cannot rule austerity out.
    """
    merged = merge_multiset(list(entries))
    for v, mult in merged:
        if _is_exact(v):
            if v.is_zero():
                continue
            if not any((v + w).is_zero() and wm == mult for w, wm in merged):
                return False
        else:
            if abs(v) <= tol:
                continue
            if not any(abs(v + w) <= tol and wm == mult for w, wm in merged):
                return False
    return True


def sign_census(entries, tol: float = 1e-9) -> tuple[int, int]:
    """Counts of distinct positive and distinct negative curvature values."""
    merged = merge_multiset(list(entries))
    pos = sum(1 for v, _ in merged if _sign_of(v) > 0)
    neg = sum(1 for v, _ in merged if _sign_of(v) < 0)
    return pos, neg


# ----------------------------------------------------------------------
# matrix Jacobi evolution (the geometric path)


def jacobi_evolution(rn: np.ndarray, d0: np.ndarray, d0p: np.ndarray,
                     r: float) -> tuple[np.ndarray, np.ndarray]:
    """Solve D'' + R D = 0 with D(0) = d0, D'(0) = d0p, R symmetric psd.

    Returns (D(r), D'(r)) computed through the spectral calculus of R:
    D(r) = cos(sqrt(R) r) d0 + (sin(sqrt(R) r)/sqrt(R)) d0p and its
    derivative.
    """
    w, v = jacobi_eigh(np.asarray(rn, dtype=np.float64))
    if w.min() < -1e-9:
        raise ValueError("normal Jacobi operator must be positive semidefinite")
    w = np.clip(w, 0.0, None)
    rt = np.sqrt(w)
    cos_d = np.cos(rt * r)
    sin_over = np.where(rt > 1e-14, np.sin(rt * r) / np.where(rt > 1e-14, rt, 1.0), r)
    rt_sin = rt * np.sin(rt * r)
    c_mat = (v * cos_d) @ v.T
    s_mat = (v * sin_over) @ v.T
    d_mat = (v * rt_sin) @ v.T
    return c_mat @ d0 + s_mat @ d0p, -d_mat @ d0 + c_mat @ d0p


def tube_shape_operator(rn: np.ndarray, d0: np.ndarray, d0p: np.ndarray,
                        r: float, orientation: str = "inward") -> np.ndarray:
    """Shape operator of the displaced hypersurface in the parallel frame.

    With respect to the outward normal gamma'(r) the operator is
    -D'(r) D(r)^{-1}; the inward normal negates it.  Near-singular D(r)
    means the radius is focal and raises ``FocalPointError``.
    """
    d, dp = jacobi_evolution(rn, d0, d0p, r)
    sv = np.linalg.svd(d, compute_uv=False)
    if sv.min() <= FOCAL_GUARD * max(1.0, sv.max()):
        raise FocalPointError(f"radius {r} is focal for this construction")
    s = -dp @ np.linalg.inv(d)
    if orientation == "inward":
        s = -s
    elif orientation != "outward":
        raise ValueError("orientation must be 'inward' or 'outward'")
    asym = np.abs(s - s.T).max()
    if asym > 1e-7 * max(1.0, np.abs(s).max()):
        raise ArithmeticError("displaced shape operator failed to be symmetric")
    return 0.5 * (s + s.T)


def parallel_shape_operator(rn: np.ndarray, shape: np.ndarray, r: float,
                            orientation: str = "outward") -> np.ndarray:
    """Displace a hypersurface shape operator to the parallel hypersurface.

    Initial conditions D(0) = I, D'(0) = -shape; the default outward
    orientation matches transporting the original normal along itself.
    """
    n = shape.shape[0]
    return tube_shape_operator(rn, np.eye(n), -shape, r, orientation)
