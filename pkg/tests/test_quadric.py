"""Tests for quadric points, tangent frames, real structures, curvature."""

import numpy as np
import pytest

from qlab.quadric import (
    QuadricPoint,
    SingularType,
    apply_A,
    apply_J,
    curvature,
    default_rng,
    g,
    herm,
    make_point,
    normal_jacobi_matrix,
    normal_jacobi_spectrum,
    random_point,
    random_tangent,
    singular_type,
    tangent_frame,
)

DIMS = (3, 4, 5, 6)


def principal_point_and_normal(m):
    """A point with a real unit normal, which the real structures fix."""
    u = np.zeros(m + 2)
    v = np.zeros(m + 2)
    u[0] = 1.0 / np.sqrt(2.0)
    v[1] = 1.0 / np.sqrt(2.0)
    pt = QuadricPoint(u + 1j * v, m)
    N = np.zeros(m + 2, dtype=complex)
    N[m + 1] = 1.0
    assert pt.tangent_residual(N) < 1e-14
    return pt, N


class TestPointConstruction:
    def test_make_point_enforces_constraints(self):
        rng = default_rng(7)
        for m in DIMS:
            raw = rng.standard_normal(m + 2) + 1j * rng.standard_normal(m + 2)
            pt = make_point(raw)
            assert abs(np.linalg.norm(pt.z) - 1.0) < 1e-12
            assert abs(np.sum(pt.z * pt.z)) < 1e-12
            assert abs(pt.u @ pt.v) < 1e-12
            assert abs(pt.u @ pt.u - 0.5) < 1e-12

    def test_unnormalized_input_is_validated(self):
        with pytest.raises(ValueError):
            make_point(np.ones(5, dtype=complex), normalize=False)

    def test_degenerate_raw_vector_rejected(self):
        with pytest.raises(ValueError):
            make_point(np.array([1.0, 1.0, 1.0, 1.0, 1.0]) + 0j)


class TestTangentSpace:
    def test_frame_is_orthonormal_and_tangent(self):
        for m in DIMS:
            pt = random_point(m, default_rng(m))
            fr = tangent_frame(pt)
            assert fr.shape == (2 * m, m + 2)
            gram = np.array([[g(a, b) for b in fr] for a in fr])
            assert np.allclose(gram, np.eye(2 * m), atol=1e-10)
            for f in fr:
                assert pt.tangent_residual(f) < 1e-10

    def test_frame_is_deterministic(self):
        pt = random_point(4, default_rng(11))
        assert np.array_equal(tangent_frame(pt), tangent_frame(pt))

    def test_J_and_A_preserve_tangency(self):
        rng = default_rng(5)
        for m in DIMS:
            pt = random_point(m, rng)
            w = random_tangent(pt, rng)
            assert pt.tangent_residual(apply_J(w)) < 1e-10
            for theta in (0.0, 0.4, 1.1, np.pi / 2, 2.0):
                assert pt.tangent_residual(apply_A(w, theta)) < 1e-10

    def test_projection_is_idempotent(self):
        rng = default_rng(6)
        pt = random_point(5, rng)
        raw = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        once = pt.project_tangent(raw)
        twice = pt.project_tangent(once)
        assert np.allclose(once, twice, atol=1e-12)
        assert pt.tangent_residual(once) < 1e-10


class TestRealStructure:
    def test_involution_anticommutation_symmetry(self):
        rng = default_rng(9)
        for m in DIMS:
            pt = random_point(m, rng)
            x = random_tangent(pt, rng)
            y = random_tangent(pt, rng)
            for theta in (0.0, 0.3, 1.7, 3.0):
                assert np.allclose(apply_A(apply_A(x, theta), theta), x, atol=1e-12)
                assert np.allclose(apply_A(apply_J(x), theta),
                                   -apply_J(apply_A(x, theta)), atol=1e-12)
                assert abs(g(apply_A(x, theta), y) - g(x, apply_A(y, theta))) < 1e-12

    def test_A_is_isometry(self):
        rng = default_rng(10)
        pt = random_point(4, rng)
        x = random_tangent(pt, rng)
        assert abs(np.linalg.norm(apply_A(x, 0.8)) - 1.0) < 1e-12


class TestCurvature:
    def test_antisymmetries_and_bianchi(self):
        rng = default_rng(12)
        for m in DIMS:
            pt = random_point(m, rng)
            X, Y, Z, W = (random_tangent(pt, rng) for _ in range(4))
            rxy = curvature(X, Y, Z)
            ryx = curvature(Y, X, Z)
            assert np.allclose(rxy, -ryx, atol=1e-10)
            assert abs(g(curvature(X, Y, Z), W) + g(curvature(X, Y, W), Z)) < 1e-10
            bianchi = curvature(X, Y, Z) + curvature(Y, Z, X) + curvature(Z, X, Y)
            assert np.linalg.norm(bianchi) < 1e-10
            # pair symmetry g(R(X,Y)Z, W) = g(R(Z,W)X, Y)
            assert abs(g(curvature(X, Y, Z), W) - g(curvature(Z, W, X), Y)) < 1e-10

    def test_theta_independence(self):
        rng = default_rng(13)
        for m in DIMS:
            pt = random_point(m, rng)
            X, Y, Z = (random_tangent(pt, rng) for _ in range(3))
            base = curvature(X, Y, Z, theta=0.0)
            for theta in (0.5, 1.3, 2.9, 4.4):
                assert np.allclose(curvature(X, Y, Z, theta=theta), base, atol=1e-10)

    def test_point_symmetry_under_J(self):
        # the quadric is Kaehler: R(JX, JY) = R(X, Y)
        rng = default_rng(14)
        pt = random_point(4, rng)
        X, Y, Z = (random_tangent(pt, rng) for _ in range(3))
        assert np.allclose(curvature(apply_J(X), apply_J(Y), Z),
                           curvature(X, Y, Z), atol=1e-10)


class TestNormalJacobi:
    def test_isotropic_spectrum_is_0_1_4(self):
        # N spanning an isotropic line: tau = 0
        for m in DIMS:
            pt, N = isotropic_point_and_normal(m)
            w = normal_jacobi_spectrum(pt, N)
            expected = np.concatenate([np.zeros(3), np.ones(2 * m - 4), [4.0]])
            assert np.allclose(np.sort(w), expected, atol=1e-10)

    def test_principal_spectrum_is_0_2(self):
        for m in DIMS:
            pt, N = principal_point_and_normal(m)
            w = normal_jacobi_spectrum(pt, N)
            expected = np.concatenate([np.zeros(m), np.full(m, 2.0)])
            assert np.allclose(np.sort(w), expected, atol=1e-10)

    def test_matrix_is_symmetric(self):
        pt = random_point(4, default_rng(20))
        N = random_tangent(pt, default_rng(21))
        mat = normal_jacobi_matrix(pt, N)
        assert np.allclose(mat, mat.T, atol=1e-12)


def isotropic_point_and_normal(m):
    pt, N_real = principal_point_and_normal(m)
    # mix two real tangent directions into an isotropic one: (e + i f)/sqrt2
    f = np.zeros(m + 2, dtype=complex)
    f[m] = 1.0
    assert pt.tangent_residual(f) < 1e-14
    N = (N_real + 1j * f) / np.sqrt(2.0)
    assert abs(complex(np.sum(N * N))) < 1e-14
    return pt, N


class TestSingularType:
    def test_constructed_cases(self):
        m = 4
        pt, N_prin = principal_point_and_normal(m)
        assert singular_type(N_prin) is SingularType.A_PRINCIPAL
        _, N_iso = isotropic_point_and_normal(m)
        assert singular_type(N_iso) is SingularType.A_ISOTROPIC

    def test_phase_rotation_keeps_principal(self):
        _, N = principal_point_and_normal(5)
        assert singular_type(np.exp(0.7j) * N) is SingularType.A_PRINCIPAL

    def test_generic_mixture(self):
        pt, N_prin = principal_point_and_normal(4)
        _, N_iso = isotropic_point_and_normal(4)
        w = 0.8 * N_prin + 0.6 * 1j * N_iso
        w = w / np.linalg.norm(w)
        tau = abs(np.sum(w * w))
        assert 1e-3 < tau < 1 - 1e-3
        assert singular_type(w) is SingularType.GENERIC

    def test_random_vectors_classify_without_conflict(self):
        rng = default_rng(30)
        for m in DIMS:
            pt = random_point(m, rng)
            for _ in range(10):
                singular_type(random_tangent(pt, rng))

    def test_needs_unit_vector(self):
        _, N = principal_point_and_normal(3)
        with pytest.raises(ValueError):
            singular_type(2.0 * N)
