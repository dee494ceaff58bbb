"""Structure tensors and spectra of real hypersurfaces in the quadric.

A hypersurface datum is a quadric point, a unit normal N tangent to the
quadric there, a g-orthonormal frame of the hypersurface tangent space
TM = T_z minus the normal line, and the shape operator written in that
frame.  For tube constructions the frame lives in the parallel
trivialization along the tube geodesic, which is legitimate because
parallel transport is a J-commuting isometry, so structure tensors and
spectra computed here match the ones at the actual tube point.

Derived objects: the Reeb field xi = -J N, the one-form eta = g(. , xi),
the restricted complex structure phi X = J X - eta(X) N, the splitting of
TM along Span{xi, A N, A xi} when N is A-isotropic, and the clustered
eigenvalue data of the shape operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._eig import jacobi_eigh
from .quadric import QuadricPoint, SingularType, apply_A, apply_J, g, singular_type

CLUSTER_TOL = 1e-7
FRAME_TOL = 1e-9


@dataclass(frozen=True)
class HypersurfaceData:
    """Pointwise hypersurface data in a fixed orthonormal frame."""

    point: QuadricPoint
    normal: np.ndarray
    frame: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=np.complex128)
        fr = np.asarray(self.frame, dtype=np.complex128)
        sh = np.asarray(self.shape, dtype=np.float64)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "frame", fr)
        object.__setattr__(self, "shape", sh)
        m = self.point.m
        if fr.shape != (2 * m - 1, m + 2):
            raise ValueError(f"frame must have shape {(2 * m - 1, m + 2)}")
        if sh.shape != (2 * m - 1, 2 * m - 1):
            raise ValueError("shape operator dimensions do not match the frame")
        if abs(np.linalg.norm(n) - 1.0) > FRAME_TOL:
            raise ValueError("normal is not unit length")
        if self.point.tangent_residual(n) > FRAME_TOL:
            raise ValueError("normal is not tangent to the quadric")
        gram = np.array([[g(a, b) for b in fr] for a in fr])
        if not np.allclose(gram, np.eye(2 * m - 1), atol=1e-8):
            raise ValueError("frame is not orthonormal")
        if max(abs(g(f, n)) for f in fr) > 1e-8:
            raise ValueError("frame is not orthogonal to the normal")
        if not np.allclose(sh, sh.T, atol=1e-8):
            raise ValueError("shape operator is not symmetric")

    @property
    def m(self) -> int:
        return self.point.m

    def vector(self, coeffs: np.ndarray) -> np.ndarray:
        """Ambient vector with the given frame coefficients."""
        return np.tensordot(np.asarray(coeffs, dtype=np.float64), self.frame, axes=1)

    def coeffs(self, w: np.ndarray) -> np.ndarray:
        """Frame coefficients of an ambient vector lying in TM."""
        return np.array([g(w, f) for f in self.frame])


def hypersurface_frame(pt: QuadricPoint, normal: np.ndarray) -> np.ndarray:
    """Orthonormal frame of TM, deterministic given point and normal.

    The first frame vector is always the Reeb direction -J N; the rest
    come from the tangent frame of the quadric, projected and run through
    modified Gram-Schmidt.
    """
    from .quadric import tangent_frame

    m = pt.m
    xi = -apply_J(normal)
    frame = [xi / np.linalg.norm(xi)]
    for cand in tangent_frame(pt):
        w = cand - g(cand, normal) * normal
        for b in frame:
            w = w - g(w, b) * b
        for b in frame:
            w = w - g(w, b) * b
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            frame.append(w / norm)
        if len(frame) == 2 * m - 1:
            break
    if len(frame) != 2 * m - 1:
        raise RuntimeError("hypersurface frame construction fell short")
    return np.stack(frame)


@dataclass(frozen=True)
class StructureTensors:
    """Almost-contact data induced on the hypersurface."""

    xi: np.ndarray          # ambient Reeb vector, -J N
    eta: np.ndarray         # frame coefficients of xi
    phi: np.ndarray         # matrix of phi in the frame
    alpha: float            # Reeb curvature g(S xi, xi)


def structure_tensors(data: HypersurfaceData) -> StructureTensors:
    xi = -apply_J(data.normal)
    eta = data.coeffs(xi)
    k = data.frame.shape[0]
    phi = np.empty((k, k))
    for j, f in enumerate(data.frame):
        img = apply_J(f) - g(apply_J(f), data.normal) * data.normal
        phi[:, j] = data.coeffs(img)
    alpha = float(eta @ data.shape @ eta)
    return StructureTensors(xi=xi, eta=eta, phi=phi, alpha=alpha)


@dataclass(frozen=True)
class QSplitting:
    """TM split along Span{xi, A N, A xi} and its phi-invariant complement."""

    distinguished: np.ndarray   # (3, m+2): xi, A N, A xi
    q_basis: np.ndarray         # (2m-4, m+2)
    q_projector: np.ndarray     # (2m-1, 2m-1) in frame coordinates


def q_splitting(data: HypersurfaceData, theta: float = 0.0) -> QSplitting:
    """Split TM when the normal is A-isotropic.

    Span{A N, A xi} does not depend on which real structure in the circle
    is used, so any theta gives the same splitting.
    """
    if singular_type(data.normal) is not SingularType.A_ISOTROPIC:
        raise ValueError("the splitting needs an A-isotropic normal")
    xi = -apply_J(data.normal)
    an = apply_A(data.normal, theta)
    axi = apply_A(xi, theta)
    triple = [xi, an, axi]
    # orthonormality is automatic for an isotropic normal; verify
    gram = np.array([[g(a, b) for b in triple] for a in triple])
    if not np.allclose(gram, np.eye(3), atol=1e-8):
        raise ArithmeticError("distinguished triple failed to be orthonormal")
    q_vecs = []
    for cand in data.frame:
        w = cand.copy()
        for b in triple + q_vecs:
            w = w - g(w, b) * b
        for b in triple + q_vecs:
            w = w - g(w, b) * b
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            q_vecs.append(w / norm)
        if len(q_vecs) == 2 * data.m - 4:
            break
    if len(q_vecs) != 2 * data.m - 4:
        raise RuntimeError("maximal holomorphic complement fell short")
    coeff_rows = np.stack([data.coeffs(v) for v in q_vecs])
    projector = coeff_rows.T @ coeff_rows
    return QSplitting(distinguished=np.stack(triple),
                      q_basis=np.stack(q_vecs),
                      q_projector=projector)


@dataclass(frozen=True)
class ShapeSpectrum:
    """Clustered eigenvalue data of a shape operator."""

    values: tuple[float, ...]
    multiplicities: tuple[int, ...]
    eigenvalues: np.ndarray
    vectors: np.ndarray
    ambiguous: bool
    cluster_tol: float

    def as_multiset(self) -> list[tuple[float, int]]:
        return list(zip(self.values, self.multiplicities))


def spectrum(data_or_matrix, cluster_tol: float = CLUSTER_TOL) -> ShapeSpectrum:
    """Eigenvalues of the shape operator, grouped into clusters.

    Adjacent eigenvalues closer than ``cluster_tol`` merge into one
    cluster reported with its mean value and multiplicity.  The spectrum
    is flagged ambiguous when some adjacent gap lands within a factor of
    ten of the tolerance, meaning the multiset depends on the tolerance
    choice.
    """
    mat = data_or_matrix.shape if isinstance(data_or_matrix, HypersurfaceData) else data_or_matrix
    w, v = jacobi_eigh(np.asarray(mat, dtype=np.float64))
    values: list[float] = []
    mults: list[int] = []
    ambiguous = False
    start = 0
    for i in range(1, len(w) + 1):
        gap = None if i == len(w) else w[i] - w[i - 1]
        if gap is not None and gap <= cluster_tol:
            continue
        block = w[start:i]
        values.append(float(block.mean()))
        mults.append(len(block))
        if gap is not None and cluster_tol < gap < 10.0 * cluster_tol:
            ambiguous = True
        start = i
    return ShapeSpectrum(values=tuple(values), multiplicities=tuple(mults),
                         eigenvalues=w, vectors=v, ambiguous=ambiguous,
                         cluster_tol=cluster_tol)


def hopf_tests(data: HypersurfaceData, thetas: int = 16) -> dict[str, float]:
    """Residuals of the Hopf conditions for the given hypersurface datum.

    Always reports ``reeb``, the defect of xi being a shape eigenvector.
    For an A-isotropic normal also reports ``kernel_AN`` and
    ``kernel_Axi`` (S A N = S A xi = 0, maximized over the circle of real
    structures) and ``tube_identity``, the defect of
    2 S phi S - alpha (phi S + S phi) - 2 phi on the complement of the
    distinguished directions.
    """
    st = structure_tensors(data)
    S = data.shape
    eta = st.eta
    out: dict[str, float] = {}
    s_xi = S @ eta
    out["reeb"] = float(np.linalg.norm(s_xi - st.alpha * eta))
    if singular_type(data.normal) is not SingularType.A_ISOTROPIC:
        return out
    xi = st.xi
    worst_an = 0.0
    worst_axi = 0.0
    for theta in np.linspace(0.0, 2.0 * np.pi, thetas, endpoint=False):
        an = data.coeffs(apply_A(data.normal, theta))
        axi = data.coeffs(apply_A(xi, theta))
        worst_an = max(worst_an, float(np.linalg.norm(S @ an)))
        worst_axi = max(worst_axi, float(np.linalg.norm(S @ axi)))
    out["kernel_AN"] = worst_an
    out["kernel_Axi"] = worst_axi
    split = q_splitting(data)
    P = split.q_projector
    phi = st.phi
    expr = 2.0 * S @ phi @ S - st.alpha * (phi @ S + S @ phi) - 2.0 * phi
    out["tube_identity"] = float(np.linalg.norm(P @ expr @ P))
    return out


def normalize_reeb_sign(data: HypersurfaceData) -> HypersurfaceData:
    """Flip the normal if needed so the Reeb curvature is nonnegative.

    Reversing N sends the shape operator to its negative, so spectra are
    compared after this normalization.
    """
    st = structure_tensors(data)
    if st.alpha >= 0.0:
        return data
    return HypersurfaceData(point=data.point, normal=-data.normal,
                            frame=data.frame, shape=-data.shape)
