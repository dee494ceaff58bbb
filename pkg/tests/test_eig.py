"""Tests for the cyclic Jacobi eigensolver and its backend switch."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qlab import _eig
from qlab._eig import NUMBA_AVAILABLE, active_backend, jacobi_eigh, offdiag_residual


def random_symmetric(rng, n, scale=5.0):
    m = rng.standard_normal((n, n)) * scale
    return 0.5 * (m + m.T)


class TestJacobiEigh:
    def test_matches_lapack_across_sizes(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 3, 5, 8, 13, 21):
            a = random_symmetric(rng, n)
            w, v = jacobi_eigh(a)
            w_ref = np.linalg.eigvalsh(a)
            assert np.allclose(w, w_ref, atol=1e-10)

    def test_eigenvector_residual_and_orthogonality(self):
        rng = np.random.default_rng(1)
        a = random_symmetric(rng, 10)
        w, v = jacobi_eigh(a)
        assert np.linalg.norm(a @ v - v * w) < 1e-10
        assert np.linalg.norm(v.T @ v - np.eye(10)) < 1e-12

    def test_offdiagonal_certificate(self):
        rng = np.random.default_rng(2)
        a = random_symmetric(rng, 12)
        w, v = jacobi_eigh(a)
        scale = max(1.0, float(np.abs(a).max()))
        assert offdiag_residual(a, w, v) <= 1e-13 * scale * 4

    def test_already_diagonal(self):
        w, v = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(w, [-1.0, 2.0, 3.0])
        assert np.allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])

    def test_repeated_eigenvalues(self):
        # projector with eigenvalues {0, 0, 1}
        u = np.array([1.0, 2.0, 2.0]) / 3.0
        a = np.outer(u, u)
        w, v = jacobi_eigh(a)
        assert np.allclose(w, [0.0, 0.0, 1.0], atol=1e-13)
        assert abs(abs(v[:, 2] @ u) - 1.0) < 1e-12

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.zeros((2, 3)))

    @given(st.integers(min_value=2, max_value=9), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=40, deadline=None)
    def test_eigenvalues_match_lapack_property(self, n, seed):
        rng = np.random.default_rng(seed)
        a = random_symmetric(rng, n, scale=10.0)
        w, _ = jacobi_eigh(a)
        assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-9)

    def test_trace_and_det_preserved(self):
        rng = np.random.default_rng(3)
        a = random_symmetric(rng, 6)
        w, _ = jacobi_eigh(a)
        assert abs(w.sum() - np.trace(a)) < 1e-10
        assert abs(np.prod(w) - np.linalg.det(a)) < 1e-8 * max(1.0, abs(np.linalg.det(a)))


class TestBackendSwitch:
    def test_env_flag_selects_numpy(self, monkeypatch):
        monkeypatch.setenv("QLAB_BACKEND", "numpy")
        assert active_backend() == "numpy"

    def test_default_prefers_numba_when_present(self, monkeypatch):
        monkeypatch.delenv("QLAB_BACKEND", raising=False)
        assert active_backend() == ("numba" if NUMBA_AVAILABLE else "numpy")

    def test_explicit_numba_without_numba_errors(self, monkeypatch):
        monkeypatch.setenv("QLAB_BACKEND", "numba")
        if NUMBA_AVAILABLE:
            assert active_backend() == "numba"
        else:
            with pytest.raises(RuntimeError):
                active_backend()

    @pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
    def test_backends_agree(self, monkeypatch):
        rng = np.random.default_rng(4)
        a = random_symmetric(rng, 9)
        monkeypatch.setenv("QLAB_BACKEND", "numpy")
        w_np, v_np = jacobi_eigh(a)
        monkeypatch.setenv("QLAB_BACKEND", "numba")
        w_nb, v_nb = jacobi_eigh(a)
        assert np.allclose(w_np, w_nb, atol=1e-12)
        assert np.allclose(np.abs(v_np), np.abs(v_nb), atol=1e-10)
