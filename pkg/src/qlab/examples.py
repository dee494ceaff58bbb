"""Constructors for the model hypersurface families in the complex quadric.

Four families are covered, each through two independent routes: a
closed-form curvature table (``*_config``) and a genuinely geometric
construction (``*_data`` / ``e3_construct``) whose spectrum the tests
compare against the table.

* E1: tubes of radius t over a totally geodesic hypersurface quadric,
  embedded as the vanishing of the last coordinate.  The tube normal is
  A-principal.
* E2: tubes of radius t over a half-dimensional totally geodesic complex
  projective space, embedded via z -> (z, iz)/sqrt(2) (only in even
  ambient dimension m = 2k).  The tube normal is A-isotropic.
* E3: orbits of Sp_k Sp_1 inside SO_{4k} acting on the quadric of real
  dimension 8k - 4, built from the Lie-algebra block description and the
  orbit second-fundamental-form formula.  These are tubes over the
  smaller singular orbit and realize six distinct constant curvatures.
* E6: tubes of radius r over the submanifold cut out by the vanishing of
  the sum of squares of the first k lift coordinates.  Its principal
  curvatures depend on the point through the squared-mass function B, so
  the tubes are not isoparametric even though every shape operator has
  the same kernel pattern.

Closed-form constructors accept optional exact scalars for the relevant
tangent (and for E6 the rational value of B), in which case the whole
table is produced in exact arithmetic; otherwise plain floats are used,
evaluated through the trigonometric forms rather than the tan-rational
ones so the two routes stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactnum import ExactScalar, exact_sqrt, ratE
from .hypersurface import HypersurfaceData, spectrum, structure_tensors
from .quadric import (
    QuadricPoint,
    SingularType,
    apply_A,
    apply_J,
    curvature,
    g,
    make_point,
    tangent_frame,
)
from .tube import TubeClass, merge_multiset, tube_shape_operator

PAIRING_TOL = 1e-9
RESIDUAL_TOL = 1e-10


def _exactish(x) -> bool:
    return isinstance(x, ExactScalar)


def _values_equal(a, b, tol: float = PAIRING_TOL) -> bool:
    if _exactish(a) or _exactish(b):
        return (a - b).is_zero()
    return abs(a - b) <= tol


def pairing_value(lam, alpha):
    """The partner (alpha*lam + 2) / (2*lam - alpha) of a curvature value.

    On the maximal holomorphic subspace of a Hopf hypersurface the shape
    operator pairs each eigenvalue with this value along the image of
    its eigenspace under the contact structure tensor.  Undefined when
    2*lam equals alpha.
    """
    den = 2 * lam - alpha
    if _exactish(den):
        if den.is_zero():
            raise ZeroDivisionError("pairing undefined at 2*lambda = alpha")
    elif abs(den) <= 1e-12:
        raise ZeroDivisionError("pairing undefined at 2*lambda = alpha")
    return (alpha * lam + 2) / den


@dataclass(frozen=True)
class CurvatureClass:
    """One principal curvature class with its structural tags.

    ``role`` is "reeb" for the Reeb eigenvalue, "kernel" for the flat
    directions spanned by the images of the normal and Reeb vector under
    the real structure, and "q" for classes on the maximal holomorphic
    subspace.  ``phi_image`` is the index of the class carrying the
    image of this eigenspace under the contact tensor (possibly the
    class itself); ``a_images`` are the indices of classes receiving its
    image under the real structure, when that is part of the data.
    """

    value: object
    multiplicity: int
    role: str = "q"
    phi_image: int | None = None
    a_images: tuple[int, ...] = ()

    def __post_init__(self):
        if self.role not in ("reeb", "kernel", "q"):
            raise ValueError("role must be 'reeb', 'kernel' or 'q'")
        if not isinstance(self.multiplicity, int) or self.multiplicity < 1:
            raise ValueError("multiplicity must be a positive integer")
        object.__setattr__(self, "a_images", tuple(self.a_images))


@dataclass(frozen=True)
class ExampleConfig:
    """Closed-form principal curvature table of one model hypersurface."""

    family: str
    parameters: dict
    m: int
    alpha: object
    classes: tuple[CurvatureClass, ...]
    normal_type: SingularType

    def __post_init__(self):
        if self.family not in ("E1", "E2", "E3", "E6"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.normal_type not in (SingularType.A_PRINCIPAL, SingularType.A_ISOTROPIC):
            raise ValueError("normal must be A-principal or A-isotropic")
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.m < 3:
            raise ValueError("need m >= 3")
        total = sum(c.multiplicity for c in self.classes)
        if total != 2 * self.m - 1:
            raise ValueError(f"multiplicities sum to {total}, expected {2 * self.m - 1}")
        self._check_roles()
        self._check_pairing()
        self._check_a_images()

    def _check_roles(self):
        reeb = [c for c in self.classes if c.role == "reeb"]
        if len(reeb) != 1 or reeb[0].multiplicity != 1:
            raise ValueError("need exactly one Reeb class of multiplicity 1")
        if not _values_equal(reeb[0].value, self.alpha):
            raise ValueError("Reeb class value does not match alpha")
        kernel = sum(c.multiplicity for c in self.classes if c.role == "kernel")
        if self.normal_type is SingularType.A_ISOTROPIC:
            if kernel != 2:
                raise ValueError("an A-isotropic datum carries a flat kernel of rank 2")
            for c in self.classes:
                if c.role == "kernel" and not _values_equal(c.value, 0 * c.value):
                    raise ValueError("kernel classes must sit at value zero")
        elif kernel != 0:
            raise ValueError("an A-principal datum has no distinguished kernel classes")

    def _check_pairing(self):
        for i, c in enumerate(self.classes):
            if c.role != "q":
                continue
            j = c.phi_image
            if j is None:
                raise ValueError("every holomorphic class needs its phi image tagged")
            partner = self.classes[j]
            if partner.role != "q" or partner.phi_image != i:
                raise ValueError("phi tags must form an involution on holomorphic classes")
            if partner.multiplicity != c.multiplicity:
                raise ValueError("phi-paired classes must have equal multiplicities")
            if not _values_equal(pairing_value(c.value, self.alpha), partner.value):
                raise ValueError(
                    f"class value {c.value} does not pair onto {partner.value}")

    def _check_a_images(self):
        for i, c in enumerate(self.classes):
            for j in c.a_images:
                if not 0 <= j < len(self.classes) or self.classes[j].role != "q":
                    raise ValueError("A-image tags must point at holomorphic classes")
            if (self.normal_type is SingularType.A_ISOTROPIC and c.a_images
                    and set(c.a_images) & {i, c.phi_image}):
                raise ValueError("A-images of an isotropic datum avoid the class "
                                 "and its phi image")

    def entries(self) -> tuple:
        return tuple((c.value, c.multiplicity) for c in self.classes)


def distinct_spectrum(config: ExampleConfig) -> tuple:
    """(value, multiplicity) pairs of the table with equal values merged."""
    merged = merge_multiset(config.entries())
    return tuple(sorted(merged, key=lambda e: float(e[0])))


# ----------------------------------------------------------------------
# closed-form tables


def e1_config(t: float, m: int, exact_tan=None) -> ExampleConfig:
    """Curvature table of the tube of radius t over a hypersurface quadric.

    Valid for 0 < t < pi/(2 sqrt 2); the normal is A-principal and the
    values are sqrt(2)cot(sqrt(2)t) once and 0, -sqrt(2)tan(sqrt(2)t)
    with multiplicity m - 1 each.  ``exact_tan``, when given, must be
    the exact value of tan(sqrt(2) t) and switches the table to exact
    arithmetic.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    if not 0.0 < t < math.pi / (2.0 * math.sqrt(2.0)):
        raise ValueError("radius must lie in (0, pi/(2 sqrt 2))")
    if exact_tan is not None:
        s2 = exact_sqrt(ratE(2))
        alpha = s2 / exact_tan
        low = -s2 * exact_tan
        zero = ratE(0)
    else:
        s = math.sqrt(2.0) * t
        alpha = math.sqrt(2.0) * math.cos(s) / math.sin(s)
        low = -math.sqrt(2.0) * math.sin(s) / math.cos(s)
        zero = 0.0
    classes = (
        CurvatureClass(alpha, 1, role="reeb"),
        CurvatureClass(zero, m - 1, role="q", phi_image=2, a_images=(1,)),
        CurvatureClass(low, m - 1, role="q", phi_image=1, a_images=(2,)),
    )
    return ExampleConfig(family="E1", parameters={"t": t, "m": m}, m=m,
                         alpha=alpha, classes=classes,
                         normal_type=SingularType.A_PRINCIPAL)


def e2_config(t: float, k: int, exact_tan=None) -> ExampleConfig:
    """Curvature table of the tube of radius t over a complex projective space.

    Lives in even dimension m = 2k, k >= 2, for 0 < t < pi/2; the normal
    is A-isotropic.  Values: 2cot(2t) on the Reeb line, 0 twice,
    -tan(t) and cot(t) with multiplicity 2k - 2 each; -tan and cot are
    the two fixed points of the holomorphic pairing, and the real
    structure swaps their eigenspaces.  ``exact_tan`` is tan(t).
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if not 0.0 < t < math.pi / 2.0:
        raise ValueError("radius must lie in (0, pi/2)")
    if exact_tan is not None:
        tau = exact_tan
        one = ratE(1)
        alpha = (one - tau * tau) / tau
        neg_tan = -tau
        cot = one / tau
        zero = ratE(0)
    else:
        alpha = 2.0 * math.cos(2.0 * t) / math.sin(2.0 * t)
        neg_tan = -math.tan(t)
        cot = math.cos(t) / math.sin(t)
        zero = 0.0
    classes = (
        CurvatureClass(alpha, 1, role="reeb"),
        CurvatureClass(zero, 2, role="kernel", phi_image=1),
        CurvatureClass(neg_tan, 2 * k - 2, role="q", phi_image=2, a_images=(3,)),
        CurvatureClass(cot, 2 * k - 2, role="q", phi_image=3, a_images=(2,)),
    )
    return ExampleConfig(family="E2", parameters={"t": t, "k": k}, m=2 * k,
                         alpha=alpha, classes=classes,
                         normal_type=SingularType.A_ISOTROPIC)


def e3_config(t: float, k: int, exact_tan=None) -> ExampleConfig:
    """Curvature table of the symplectic-group orbit at parameter t.

    Ambient dimension m = 4k - 2, k >= 2, 0 < t < pi/4.  Six values:
    2tan(2t) on the Reeb line, 0 twice, tan(t) and -cot(t) twice each
    (swapped by the contact tensor), and the two pairing fixed points
    (cos t + sin t)/(cos t - sin t), -(cos t - sin t)/(cos t + sin t)
    with multiplicity 4k - 6 each.  ``exact_tan`` is tan(t).
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if not 0.0 < t < math.pi / 4.0:
        raise ValueError("parameter must lie in (0, pi/4)")
    if exact_tan is not None:
        tau = exact_tan
        one = ratE(1)
        alpha = 4 * tau / (one - tau * tau)
        lam1 = tau
        lam2 = -(one / tau)
        lam3 = (one + tau) / (one - tau)
        lam4 = -((one - tau) / (one + tau))
        zero = ratE(0)
    else:
        c, s = math.cos(t), math.sin(t)
        alpha = 2.0 * math.tan(2.0 * t)
        lam1 = math.tan(t)
        lam2 = -c / s
        lam3 = (c + s) / (c - s)
        lam4 = -(c - s) / (c + s)
        zero = 0.0
    classes = (
        CurvatureClass(alpha, 1, role="reeb"),
        CurvatureClass(zero, 2, role="kernel", phi_image=1),
        CurvatureClass(lam1, 2, role="q", phi_image=3, a_images=(4, 5)),
        CurvatureClass(lam2, 2, role="q", phi_image=2, a_images=(4, 5)),
        CurvatureClass(lam3, 4 * k - 6, role="q", phi_image=4),
        CurvatureClass(lam4, 4 * k - 6, role="q", phi_image=5),
    )
    return ExampleConfig(family="E3", parameters={"t": t, "k": k}, m=4 * k - 2,
                         alpha=alpha, classes=classes,
                         normal_type=SingularType.A_ISOTROPIC)


def _e6_window_ok(B: float, r: float) -> bool:
    return 0.0 < r < math.pi / 4.0 and math.sin(r) ** 2 < B < math.cos(r) ** 2


def e6_tube_config(k: int, m: int, B: float, r: float,
                   exact_B: Fraction | None = None,
                   exact_tan=None) -> ExampleConfig:
    """Curvature table of the tube of radius r over the coordinate cone slice.

    The base is the set where the first k lift coordinates have
    vanishing sum of squares, B in (0, 1) is the squared mass of those
    coordinates at the footpoint, and the admissible window is
    sin^2(r) < B < cos^2(r) with 0 < r < pi/4.  Values: 2cot(2r) on the
    Reeb line, 0 twice, then two pairs built from sqrt((1-B)/B) with
    multiplicity k - 2 and from sqrt(B/(1-B)) with multiplicity m - k;
    zero-multiplicity classes are dropped, so the table has four
    distinct values when k = 2 or k = m and six otherwise.  The exact
    route needs ``exact_B`` rational with representable sqrt((1-B)/B)
    and ``exact_tan`` = tan(r).
    """
    if not 2 <= k <= m:
        raise ValueError("need 2 <= k <= m")
    if m < 3:
        raise ValueError("need m >= 3")
    if not 0.0 < B < 1.0:
        raise ValueError("B must lie in (0, 1)")
    if not _e6_window_ok(B, r):
        raise ValueError("radius leaves the admissible tube window")
    if exact_tan is not None:
        if exact_B is None:
            raise ValueError("exact evaluation needs exact_B as well")
        Bq = Fraction(exact_B)
        c = exact_sqrt(ratE((1 - Bq) / Bq))
        if c is None:
            raise ValueError("sqrt((1-B)/B) is not exactly representable")
        one = ratE(1)
        tau = exact_tan
        b = one / c
        alpha = (one - tau * tau) / tau
        lam1 = (c - tau) / (one + c * tau)
        lam2 = -((c + tau) / (one - c * tau))
        lam3 = (b - tau) / (one + b * tau)
        lam4 = -((b + tau) / (one - b * tau))
        zero = ratE(0)
    else:
        c = math.sqrt((1.0 - B) / B)
        b = math.sqrt(B / (1.0 - B))
        cr, sr = math.cos(r), math.sin(r)
        alpha = 2.0 * math.cos(2.0 * r) / math.sin(2.0 * r)
        lam1 = (c * cr - sr) / (cr + c * sr)
        lam2 = (-c * cr - sr) / (cr - c * sr)
        lam3 = (b * cr - sr) / (cr + b * sr)
        lam4 = (-b * cr - sr) / (cr - b * sr)
        zero = 0.0
    classes = [
        CurvatureClass(alpha, 1, role="reeb"),
        CurvatureClass(zero, 2, role="kernel", phi_image=1),
    ]
    if k > 2:
        i = len(classes)
        classes.append(CurvatureClass(lam1, k - 2, role="q", phi_image=i + 1))
        classes.append(CurvatureClass(lam2, k - 2, role="q", phi_image=i))
    if k < m:
        i = len(classes)
        classes.append(CurvatureClass(lam3, m - k, role="q", phi_image=i + 1))
        classes.append(CurvatureClass(lam4, m - k, role="q", phi_image=i))
    return ExampleConfig(family="E6", parameters={"k": k, "m": m, "B": B, "r": r},
                         m=m, alpha=alpha, classes=tuple(classes),
                         normal_type=SingularType.A_ISOTROPIC)


# ----------------------------------------------------------------------
# geodesics, parallel transport and the generic tube builder


def _so_exp(x: np.ndarray) -> np.ndarray:
    """Matrix exponential of a real antisymmetric matrix."""
    x = np.asarray(x, dtype=np.float64)
    w, v = np.linalg.eigh(1j * x)
    return np.real(v @ np.diag(np.exp(-1j * w)) @ v.conj().T)


def _completed_rotation(pt: QuadricPoint) -> np.ndarray:
    """Orthogonal matrix whose first two columns are sqrt(2) u, sqrt(2) v."""
    n = pt.z.size
    cols = [math.sqrt(2.0) * pt.u, math.sqrt(2.0) * pt.v]
    for j in range(n):
        cand = np.zeros(n)
        cand[j] = 1.0
        for b in cols:
            cand = cand - (cand @ b) * b
        for b in cols:
            cand = cand - (cand @ b) * b
        norm = np.linalg.norm(cand)
        if norm > 1e-8:
            cols.append(cand / norm)
        if len(cols) == n:
            break
    if len(cols) != n:
        raise RuntimeError("rotation completion fell short")
    return np.stack(cols, axis=1)


def geodesic_transport(pt: QuadricPoint, w: np.ndarray, t: float,
                       vectors) -> tuple[QuadricPoint, list[np.ndarray]]:
    """Follow the geodesic with unit velocity w for time t, carrying vectors.

    Returns the endpoint and the parallel transports of the given
    ambient tangent vectors.  The transport is realized by the
    one-parameter isometry group translating along the geodesic, which
    acts complex-linearly and commutes with the complex structure.
    """
    R = _completed_rotation(pt)
    y = R.T @ w
    if max(abs(y[0]), abs(y[1])) > 1e-9:
        raise ValueError("velocity is not horizontal at the base point")
    b = np.stack([math.sqrt(2.0) * y[2:].real, math.sqrt(2.0) * y[2:].imag])
    n = pt.z.size
    x = np.zeros((n, n))
    x[:2, 2:] = -b
    x[2:, :2] = b.T
    mover = R @ _so_exp(t * x) @ R.T
    new_pt = make_point(mover @ pt.z, normalize=False)
    return new_pt, [mover @ np.asarray(vec, dtype=np.complex128) for vec in vectors]


def displaced_hypersurface(pt: QuadricPoint, eta: np.ndarray, perp_basis,
                           tangent_flags, base_shape: np.ndarray,
                           r: float) -> HypersurfaceData:
    """Hypersurface datum of the tube of radius r over a base submanifold.

    ``perp_basis`` is a g-orthonormal basis of the orthogonal complement
    of the unit normal ``eta`` inside the quadric tangent space at
    ``pt``, whose first vector must be J(eta) so the transported frame
    starts at the Reeb direction of the tube.  ``tangent_flags`` marks
    which basis vectors are tangent to the base, and ``base_shape`` is
    the base shape operator with respect to ``eta`` on those vectors.
    The resulting shape operator refers to the inward normal (pointing
    back at the base).
    """
    basis = [np.asarray(v, dtype=np.complex128) for v in perp_basis]
    flags = np.asarray(tangent_flags, dtype=bool)
    if len(basis) != flags.size:
        raise ValueError("one flag per basis vector")
    if np.linalg.norm(basis[0] - apply_J(eta)) > 1e-9:
        raise ValueError("the first basis vector must be J of the normal")
    k = len(basis)
    rn = np.empty((k, k))
    images = [curvature(v, eta, eta) for v in basis]
    for i in range(k):
        for j in range(k):
            rn[i, j] = g(images[j], basis[i])
    rn = 0.5 * (rn + rn.T)
    d0 = np.diag(flags.astype(np.float64))
    d0p = np.diag((~flags).astype(np.float64))
    idx = np.where(flags)[0]
    shape = np.asarray(base_shape, dtype=np.float64)
    if shape.shape != (idx.size, idx.size):
        raise ValueError("base shape operator must match the tangent-flagged block")
    d0p[np.ix_(idx, idx)] = -shape
    s_r = tube_shape_operator(rn, d0, d0p, r, orientation="inward")
    tube_pt, moved = geodesic_transport(pt, eta, r, basis + [eta])
    frame = np.stack(moved[:-1])
    normal = -moved[-1]
    return HypersurfaceData(point=tube_pt, normal=normal, frame=frame, shape=s_r)


def base_tube_classes(pt: QuadricPoint, eta: np.ndarray, perp_basis,
                      tangent_flags, base_shape: np.ndarray,
                      cluster_tol: float = 1e-9) -> list[TubeClass]:
    """Scalar Jacobi classes of a tube construction, from the curvature tensor.

    Diagonalizes the normal Jacobi operator blockwise over base-tangent
    and base-normal directions, then splits each tangent eigenspace
    along the base shape operator.  Raises when the operators fail to
    respect the blocks, since then no scalar reduction exists.
    """
    basis = [np.asarray(v, dtype=np.complex128) for v in perp_basis]
    flags = np.asarray(tangent_flags, dtype=bool)
    k = len(basis)
    rn = np.empty((k, k))
    images = [curvature(v, eta, eta) for v in basis]
    for i in range(k):
        for j in range(k):
            rn[i, j] = g(images[j], basis[i])
    rn = 0.5 * (rn + rn.T)
    t_idx = np.where(flags)[0]
    n_idx = np.where(~flags)[0]
    off = rn[np.ix_(t_idx, n_idx)]
    if off.size and np.abs(off).max() > 1e-8:
        raise ArithmeticError("normal Jacobi operator mixes tangent and normal parts")
    out: list[TubeClass] = []
    if n_idx.size:
        w = np.linalg.eigvalsh(rn[np.ix_(n_idx, n_idx)])
        for kappa, mult in merge_multiset([(float(x), 1) for x in w]):
            out.append(TubeClass(max(kappa, 0.0), mult, "normal"))
    if t_idx.size:
        block = rn[np.ix_(t_idx, t_idx)]
        w, v = np.linalg.eigh(block)
        shape = np.asarray(base_shape, dtype=np.float64)
        for kappa, _ in merge_multiset([(float(x), 1) for x in w]):
            cols = v[:, np.abs(w - kappa) <= 1e-7]
            sub = cols.T @ shape @ cols
            resid = shape @ cols - cols @ sub
            if np.abs(resid).max() > 1e-8:
                raise ArithmeticError("base shape operator mixes curvature classes")
            for s_val, mult in merge_multiset(
                    [(float(x), 1) for x in np.linalg.eigvalsh(sub)]):
                out.append(TubeClass(max(kappa, 0.0), mult, "tangent", s_val))
    return out


# ----------------------------------------------------------------------
# geometric tube data for the two totally geodesic bases


def e1_recipe(m: int) -> tuple:
    """Tube ingredients over the totally geodesic hypersurface quadric.

    The base point is a fixed point of the smaller quadric embedded in
    the first m + 1 coordinates; the tube direction is the constant unit
    vector along the last coordinate, which is A-principal.  Returns the
    (point, normal, perp basis, tangent flags, base shape) tuple
    consumed by ``displaced_hypersurface`` and ``base_tube_classes``.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    inner = np.zeros(m + 1, dtype=np.complex128)
    inner[0] = 1.0 / math.sqrt(2.0)
    inner[1] = 1j / math.sqrt(2.0)
    sub_pt = make_point(inner, normalize=False)
    z = np.zeros(m + 2, dtype=np.complex128)
    z[: m + 1] = inner
    pt = make_point(z, normalize=False)
    eta = np.zeros(m + 2, dtype=np.complex128)
    eta[m + 1] = 1.0
    basis = [apply_J(eta)]
    for v in tangent_frame(sub_pt):
        emb = np.zeros(m + 2, dtype=np.complex128)
        emb[: m + 1] = v
        basis.append(emb)
    flags = [False] + [True] * (2 * m - 2)
    shape0 = np.zeros((2 * m - 2, 2 * m - 2))
    return pt, eta, basis, flags, shape0


def e1_data(t: float, m: int) -> HypersurfaceData:
    """Geometric tube of radius t over the hypersurface quadric."""
    if not 0.0 < t < math.pi / (2.0 * math.sqrt(2.0)):
        raise ValueError("radius must lie in (0, pi/(2 sqrt 2))")
    pt, eta, basis, flags, shape0 = e1_recipe(m)
    return displaced_hypersurface(pt, eta, basis, flags, shape0, t)


def e2_recipe(k: int) -> tuple:
    """Tube ingredients over the totally geodesic complex projective space.

    The base sits inside the quadric of dimension m = 2k through
    z' -> (z', iz')/sqrt(2); both its tangent and normal bundles are
    complex, and the chosen tube direction is A-isotropic.  Returns the
    (point, normal, perp basis, tangent flags, base shape) tuple
    consumed by ``displaced_hypersurface`` and ``base_tube_classes``.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    n = 2 * k + 2

    def tangent_vec(wp: np.ndarray) -> np.ndarray:
        out = np.zeros(n, dtype=np.complex128)
        out[: k + 1] = wp
        out[k + 1:] = 1j * wp
        return out / math.sqrt(2.0)

    def normal_vec(wpp: np.ndarray) -> np.ndarray:
        out = np.zeros(n, dtype=np.complex128)
        out[: k + 1] = wpp
        out[k + 1:] = -1j * wpp
        return out / math.sqrt(2.0)

    unit = np.zeros(k + 1, dtype=np.complex128)
    unit[0] = 1.0
    z = tangent_vec(unit)  # the lift (e_0 + i e_{k+1}) / sqrt 2
    pt = make_point(z, normalize=False)
    e1 = np.zeros(k + 1, dtype=np.complex128)
    e1[1] = 1.0
    eta = normal_vec(e1)
    basis = [normal_vec(1j * e1)]
    flags = [False]
    for j in range(1, k + 1):
        ej = np.zeros(k + 1, dtype=np.complex128)
        ej[j] = 1.0
        basis.append(tangent_vec(ej))
        basis.append(tangent_vec(1j * ej))
        flags.extend([True, True])
    for j in range(2, k + 1):
        ej = np.zeros(k + 1, dtype=np.complex128)
        ej[j] = 1.0
        basis.append(normal_vec(ej))
        basis.append(normal_vec(1j * ej))
        flags.extend([False, False])
    shape0 = np.zeros((2 * k, 2 * k))
    return pt, eta, basis, flags, shape0


def e2_data(t: float, k: int) -> HypersurfaceData:
    """Geometric tube of radius t over the complex projective space."""
    if not 0.0 < t < math.pi / 2.0:
        raise ValueError("radius must lie in (0, pi/2)")
    pt, eta, basis, flags, shape0 = e2_recipe(k)
    return displaced_hypersurface(pt, eta, basis, flags, shape0, t)


# ----------------------------------------------------------------------
# the coordinate cone slice and its tubes


@dataclass(frozen=True)
class E6BaseData:
    """Spectral and pointwise data of the coordinate cone slice.

    ``shape_classes`` lists the base shape eigenvalues with respect to
    the first distinguished unit normal (they are the same multiset for
    every unit normal), ``jacobi_classes`` the normal Jacobi eigenvalues,
    and ``tube_classes`` the scalar Jacobi classes feeding the tube
    spectrum.  The pointwise fields hold an explicitly constructed base
    point with its two unit normals, a tangent basis whose first two
    vectors span the flat directions, and the numerically computed base
    shape operator in that basis.
    """

    k: int
    m: int
    B: float
    shape_classes: tuple
    jacobi_classes: tuple
    tube_classes: tuple
    point: QuadricPoint
    eta1: np.ndarray
    eta2: np.ndarray
    tangent_basis: np.ndarray
    shape_matrix: np.ndarray


def _e6_point(k: int, m: int, B: float) -> QuadricPoint:
    """A base point with mass B: two paired coordinates in each block."""
    a = math.sqrt(B / 2.0)
    b = math.sqrt((1.0 - B) / 2.0)
    z = np.zeros(m + 2, dtype=np.complex128)
    z[0], z[1] = a, 1j * a
    z[k], z[k + 1] = b, 1j * b
    return make_point(z, normalize=False)


def _e6_mass(z: np.ndarray, k: int) -> float:
    return float(np.sum(np.abs(z[:k]) ** 2))


def _e6_unit_normal(z: np.ndarray, k: int) -> np.ndarray:
    """The distinguished unit normal of the cone slice at lift z."""
    B = _e6_mass(z, k)
    v1 = np.zeros_like(z)
    v1[:k] = np.conj(z[:k])
    return (v1 - B * np.conj(z)) / math.sqrt(B * (1.0 - B))


def _e6_normal_derivative(z: np.ndarray, k: int, x: np.ndarray) -> np.ndarray:
    """Directional derivative of the normal field along an ambient vector x."""
    B = _e6_mass(z, k)
    beta = 2.0 * float(np.real(np.vdot(z[:k], x[:k])))
    v1 = np.zeros_like(z)
    v1[:k] = np.conj(z[:k])
    dv1 = np.zeros_like(z)
    dv1[:k] = np.conj(x[:k])
    core = v1 - B * np.conj(z)
    dcore = dv1 - beta * np.conj(z) - B * np.conj(x)
    scale = 1.0 / math.sqrt(B * (1.0 - B))
    dscale = -0.5 * (1.0 - 2.0 * B) * scale / (B * (1.0 - B))
    return scale * dcore + dscale * beta * core


def e6_base_data(k: int, m: int, B: float) -> E6BaseData:
    """Spectral data of the slice where the first k squares sum to zero.

    Constructs an explicit base point of mass B, its two unit normals
    (the second being J of the first), a tangent basis ordered as the
    two flat directions followed by the four real coordinate blocks, and
    the base shape operator computed by differentiating the normal
    field.  The eigenvalue tables carry sqrt((1-B)/B) with multiplicity
    k - 2 (each sign) and sqrt(B/(1-B)) with multiplicity m - k, plus a
    flat rank-2 kernel; they hold for every unit normal.
    """
    if not 2 <= k <= m:
        raise ValueError("need 2 <= k <= m")
    if m < 3:
        raise ValueError("need m >= 3")
    if not 0.0 < B < 1.0:
        raise ValueError("B must lie in (0, 1)")
    c = math.sqrt((1.0 - B) / B)
    b = math.sqrt(B / (1.0 - B))
    shape_classes = [(0.0, 2)]
    tube_classes = [TubeClass(4.0, 1, "normal"), TubeClass(0.0, 2, "tangent", 0.0)]
    if k > 2:
        shape_classes += [(-c, k - 2), (c, k - 2)]
        tube_classes += [TubeClass(1.0, k - 2, "tangent", -c),
                         TubeClass(1.0, k - 2, "tangent", c)]
    if k < m:
        shape_classes += [(b, m - k), (-b, m - k)]
        tube_classes += [TubeClass(1.0, m - k, "tangent", b),
                         TubeClass(1.0, m - k, "tangent", -b)]
    pt = _e6_point(k, m, B)
    eta1 = _e6_unit_normal(pt.z, k)
    eta2 = apply_J(eta1)
    a_eta1 = apply_A(eta1)
    basis = [a_eta1, apply_J(a_eta1)]
    for j in range(2, k):
        v = np.zeros(m + 2, dtype=np.complex128)
        v[j] = 1.0
        basis.append(v)
    for j in range(2, k):
        v = np.zeros(m + 2, dtype=np.complex128)
        v[j] = 1j
        basis.append(v)
    for j in range(k + 2, m + 2):
        v = np.zeros(m + 2, dtype=np.complex128)
        v[j] = 1.0
        basis.append(v)
    for j in range(k + 2, m + 2):
        v = np.zeros(m + 2, dtype=np.complex128)
        v[j] = 1j
        basis.append(v)
    tangent = np.stack(basis)
    n_tan = len(basis)
    shape = np.empty((n_tan, n_tan))
    for j, x in enumerate(basis):
        deriv = pt.project_tangent(_e6_normal_derivative(pt.z, k, x))
        for i, y in enumerate(basis):
            shape[i, j] = -g(deriv, y)
    shape = 0.5 * (shape + shape.T)
    return E6BaseData(k=k, m=m, B=B,
                      shape_classes=tuple(shape_classes),
                      jacobi_classes=((0.0, 3), (1.0, 2 * m - 4), (4.0, 1)),
                      tube_classes=tuple(tube_classes),
                      point=pt, eta1=eta1, eta2=eta2,
                      tangent_basis=tangent, shape_matrix=shape)


def e6_recipe(base: E6BaseData) -> tuple:
    """Tube ingredients of a constructed cone-slice point."""
    basis = [base.eta2] + [v for v in base.tangent_basis]
    flags = [False] + [True] * base.tangent_basis.shape[0]
    return base.point, base.eta1, basis, flags, base.shape_matrix


def e6_tube_data(base: E6BaseData, r: float) -> HypersurfaceData:
    """Geometric tube of radius r over a constructed cone-slice point."""
    if not _e6_window_ok(base.B, r):
        raise ValueError("radius leaves the admissible tube window")
    pt, eta, basis, flags, shape = e6_recipe(base)
    return displaced_hypersurface(pt, eta, basis, flags, shape, r)


# ----------------------------------------------------------------------
# the symplectic orbit family


def _sym_basis(k: int) -> list[np.ndarray]:
    out = []
    for a in range(k):
        for bi in range(a, k):
            mat = np.zeros((k, k))
            mat[a, bi] = 1.0
            mat[bi, a] = 1.0
            out.append(mat)
    return out


def _antisym_basis(k: int) -> list[np.ndarray]:
    out = []
    for a in range(k):
        for bi in range(a + 1, k):
            mat = np.zeros((k, k))
            mat[a, bi] = 1.0
            mat[bi, a] = -1.0
            out.append(mat)
    return out


def _block4(k: int, placements: dict) -> np.ndarray:
    out = np.zeros((4 * k, 4 * k))
    for (i, j), mat in placements.items():
        out[i * k:(i + 1) * k, j * k:(j + 1) * k] = mat
    return out


def _h_family_matrices(k: int) -> list[np.ndarray]:
    """Spanning matrices of the symplectic product algebra in 4k x 4k blocks."""
    eye = np.eye(k)
    out = []
    for B in _sym_basis(k):
        out.append(_block4(k, {(0, 1): -B, (1, 0): B, (2, 3): -B, (3, 2): B}))
    for C in _sym_basis(k):
        out.append(_block4(k, {(0, 2): -C, (1, 3): C, (2, 0): C, (3, 1): -C}))
    for D in _sym_basis(k):
        out.append(_block4(k, {(0, 3): -D, (1, 2): -D, (2, 1): D, (3, 0): D}))
    for F in _antisym_basis(k):
        out.append(_block4(k, {(0, 0): F, (1, 1): F, (2, 2): F, (3, 3): F}))
    out.append(_block4(k, {(0, 1): -eye, (1, 0): eye, (2, 3): eye, (3, 2): -eye}))
    out.append(_block4(k, {(0, 2): -eye, (1, 3): -eye, (2, 0): eye, (3, 1): eye}))
    out.append(_block4(k, {(0, 3): -eye, (1, 2): eye, (2, 1): -eye, (3, 0): eye}))
    return out


def _eta_matrices(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three unit normal-complement generators."""
    jt = np.zeros((k, k))
    jt[0, 1] = -1.0
    jt[1, 0] = 1.0
    eta1 = _block4(k, {(0, 1): jt, (1, 0): jt})
    eta2 = _block4(k, {(0, 2): jt, (2, 0): jt})
    eta3 = _block4(k, {(0, 3): jt, (3, 0): jt})
    return eta1, eta2, eta3


def _lie_ip(x: np.ndarray, y: np.ndarray) -> float:
    return -0.25 * float(np.trace(x @ y))


def _lie_gram_schmidt(mats, drop_tol: float = 1e-9) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for mat in mats:
        w = mat
        for _ in range(2):
            for b in out:
                w = w - _lie_ip(w, b) * b
        norm = math.sqrt(max(_lie_ip(w, w), 0.0))
        if norm > drop_tol:
            out.append(w / norm)
    return out


@dataclass(frozen=True)
class LieOrbitData:
    """Matrix-level data of the symplectic orbit construction.

    ``basis_h`` is an orthonormal basis (under -tr(XY)/4) of the
    symmetry algebra, ``eta1..eta3`` the unit generators of the normal
    complement of its projection, and ``g_t`` the one-parameter rotation
    carrying the singular orbit to the tube at parameter t.  The Cartan
    projection and the identification of projected matrices with ambient
    tangent vectors at the reference point live here as methods.
    """

    k: int
    t: float
    basis_h: tuple
    eta1: np.ndarray
    eta2: np.ndarray
    eta3: np.ndarray
    g_t: np.ndarray

    def project(self, x: np.ndarray) -> np.ndarray:
        """Component of a matrix in the off-diagonal (2, 4k-2) blocks."""
        out = np.zeros_like(x)
        out[:2, 2:] = x[:2, 2:]
        out[2:, :2] = x[2:, :2]
        return out

    def b_matrix(self, x: np.ndarray) -> np.ndarray:
        """Top-right 2 x (4k-2) block of a projected matrix."""
        return x[:2, 2:]

    def to_tangent(self, x: np.ndarray) -> np.ndarray:
        """Ambient tangent vector at the reference point of a projected matrix."""
        b = self.b_matrix(x)
        out = np.zeros(4 * self.k, dtype=np.complex128)
        out[2:] = (b[0] + 1j * b[1]) / math.sqrt(2.0)
        return out


def e3_construct(k: int, t: float,
                 exact_tan=None) -> tuple[LieOrbitData, HypersurfaceData, ExampleConfig]:
    """Build the symplectic orbit at parameter t from its matrix algebra.

    Assembles the block basis of the symmetry algebra, conjugates it by
    the one-parameter rotation, projects onto the tangent slot, checks
    that the orbit tangent space has dimension 8k - 5, and computes the
    shape operator from the orbit second-fundamental-form identity
    2<h(X, Y), N> = <[N, X]*, Y> + <X, [N, Y]*> using minimal-norm lifts
    of the tangent basis.  The unit normal is oriented so the Reeb
    eigenvalue is positive.  Returns the matrix-level data, the
    pointwise hypersurface datum at the reference point, and the
    closed-form curvature table.
    """
    if k not in (2, 3):
        raise ValueError("supported block counts are k = 2 and k = 3")
    if not 0.0 < t < math.pi / 4.0:
        raise ValueError("parameter must lie in (0, pi/4)")
    raw = _h_family_matrices(k)
    onb_h = _lie_gram_schmidt(raw)
    want_h = 2 * k * k + k + 3
    if len(onb_h) != want_h:
        raise ArithmeticError(
            f"symmetry algebra basis has rank {len(onb_h)}, expected {want_h}")
    eta1, eta2, eta3 = _eta_matrices(k)
    g_t = _so_exp(t * eta1)
    orbit = LieOrbitData(k=k, t=t, basis_h=tuple(onb_h),
                         eta1=eta1, eta2=eta2, eta3=eta3, g_t=g_t)
    n_mat = -eta1
    conj = [g_t @ x @ g_t.T for x in onb_h]
    projs = [orbit.project(x) for x in conj]
    onb_p = _lie_gram_schmidt(projs)
    if len(onb_p) != 8 * k - 5:
        raise ArithmeticError(
            f"orbit tangent space has dimension {len(onb_p)}, expected {8 * k - 5}")
    # minimal-norm lifts: coefficients in the conjugated algebra basis
    a_mat = np.stack([orbit.project(z).ravel() for z in conj], axis=1)
    lifts = []
    for u in onb_p:
        coeff, *_ = np.linalg.lstsq(a_mat, u.ravel(), rcond=None)
        lift = sum(ci * zi for ci, zi in zip(coeff, conj))
        if np.abs(orbit.project(lift) - u).max() > 1e-9:
            raise ArithmeticError("tangent vector failed to lift into the algebra")
        lifts.append(lift)
    dim = len(onb_p)
    brackets = [orbit.project(n_mat @ l - l @ n_mat) for l in lifts]
    s_mat = np.empty((dim, dim))
    for i in range(dim):
        for j in range(dim):
            s_mat[i, j] = 0.5 * (_lie_ip(brackets[i], onb_p[j])
                                 + _lie_ip(onb_p[i], brackets[j]))
    if np.abs(s_mat - s_mat.T).max() > 1e-10:
        raise ArithmeticError("orbit shape operator failed to be symmetric")
    s_mat = 0.5 * (s_mat + s_mat.T)
    # move to ambient vectors at the reference point
    point = make_point(_reference_lift(k), normalize=False)
    vecs = [orbit.to_tangent(u) for u in onb_p]
    normal = orbit.to_tangent(orbit.project(n_mat))
    xi = -apply_J(normal)
    xi_coeffs = np.array([g(xi, v) for v in vecs])
    alpha_now = float(xi_coeffs @ s_mat @ xi_coeffs)
    if alpha_now < 0.0:
        normal = -normal
        s_mat = -s_mat
        xi = -xi
        xi_coeffs = -xi_coeffs
    # reorder the frame so the Reeb vector comes first
    frame = [xi]
    for v in vecs:
        w = v
        for b in frame:
            w = w - g(w, b) * b
        for b in frame:
            w = w - g(w, b) * b
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            frame.append(w / norm)
    if len(frame) != dim:
        raise ArithmeticError("frame reordering lost a direction")
    q_rot = np.array([[g(f, v) for f in frame] for v in vecs])
    shape = q_rot.T @ s_mat @ q_rot
    data = HypersurfaceData(point=point, normal=normal,
                            frame=np.stack(frame), shape=0.5 * (shape + shape.T))
    config = e3_config(t, k, exact_tan=exact_tan)
    return orbit, data, config


def _reference_lift(k: int) -> np.ndarray:
    z = np.zeros(4 * k, dtype=np.complex128)
    z[0] = 1.0 / math.sqrt(2.0)
    z[1] = 1j / math.sqrt(2.0)
    return z


def e3_eigenspace_relations(data: HypersurfaceData) -> dict[str, float]:
    """Residuals of the structural eigenspace relations of the orbit family.

    Checks, on the constructed datum: the contact tensor swaps the
    tan/-cot eigenspaces, each pairing-fixed-point eigenspace is
    J-invariant (two relations), the real structure maps the swapped
    pair into the fixed-point pair, and the images of the normal and
    Reeb vector under the real structure lie in the shape kernel.
    Always returns all five residuals.
    """
    st = structure_tensors(data)
    alpha = st.alpha
    t = 0.5 * math.atan2(alpha, 2.0)
    c, s = math.cos(t), math.sin(t)
    lam = [math.tan(t), -c / s, (c + s) / (c - s), -(c - s) / (c + s)]
    spec = spectrum(data)
    w, v = spec.eigenvalues, spec.vectors

    def eig_cols(target: float) -> np.ndarray:
        cols = v[:, np.abs(w - target) <= 1e-6]
        if cols.size == 0:
            raise ArithmeticError(f"no eigenvalues near {target}")
        return cols

    def ambient(cols: np.ndarray) -> list[np.ndarray]:
        return [data.vector(cols[:, i]) for i in range(cols.shape[1])]

    spaces = [ambient(eig_cols(x)) for x in lam]

    def proj_resid(vecs, targets) -> float:
        worst = 0.0
        pool = [u for space in targets for u in space]
        for x in vecs:
            rem = x.copy()
            for u in pool:
                rem = rem - g(rem, u) * u
            worst = max(worst, float(np.linalg.norm(rem)))
        return worst

    out = {
        "phi_swaps_pair": proj_resid([apply_J(x) for x in spaces[0]], [spaces[1]]),
        "first_fixed_point_j_invariant": proj_resid(
            [apply_J(x) for x in spaces[2]], [spaces[2]]),
        "second_fixed_point_j_invariant": proj_resid(
            [apply_J(x) for x in spaces[3]], [spaces[3]]),
        "a_maps_pair_into_fixed_points": proj_resid(
            [apply_A(x) for x in spaces[0] + spaces[1]], [spaces[2], spaces[3]]),
    }
    an = data.coeffs(apply_A(data.normal))
    axi = data.coeffs(apply_A(st.xi))
    out["shape_kernel"] = max(float(np.linalg.norm(data.shape @ an)),
                              float(np.linalg.norm(data.shape @ axi)))
    return out
