"""Tests for the Jacobi-field tube and parallel-displacement calculus."""

import math

import numpy as np
import pytest

from qlab.exactnum import ratE, sqrtE
from qlab.hypersurface import HypersurfaceData, spectrum, structure_tensors
from qlab.quadric import curvature, g
from qlab.tube import (
    FocalPointError,
    TubeClass,
    TubeSpectrum,
    austere_test,
    displace_isotropic,
    displace_q_eigenvalue,
    displace_reeb_eigenvalue,
    focal_data,
    jacobi_evolution,
    jacobi_tube_spectrum,
    mean_curvature,
    parallel_config,
    parallel_shape_operator,
    sign_census,
    tube_shape_operator,
)

from test_hypersurface import isotropic_datum, phi_paired_shape


class _Config:
    """Minimal Hopf configuration stub: alpha plus holomorphic classes."""

    def __init__(self, alpha, classes, m):
        self.alpha = alpha
        self.classes = classes
        self.m = m


class TestScalarTubeSpectrum:
    def test_geodesic_sphere_in_flat_directions(self):
        # a flat normal class gives curvature 1/r toward the center
        sp = jacobi_tube_spectrum([TubeClass(0.0, 1, "normal")], 0.5, "inward")
        assert abs(sp.entries[0][0] - 2.0) < 1e-12
        sp_out = jacobi_tube_spectrum([TubeClass(0.0, 1, "normal")], 0.5, "outward")
        assert abs(sp_out.entries[0][0] + 2.0) < 1e-12

    def test_totally_geodesic_subquadric_tube_table(self):
        # tube over a totally geodesic hypersurface-quadric, inward normal:
        # sqrt2 cot(sqrt2 t) once, 0 and -sqrt2 tan(sqrt2 t) with equal counts
        m, t = 5, 0.3
        classes = [
            TubeClass(2.0, m - 1, "tangent"),
            TubeClass(0.0, m - 1, "tangent"),
            TubeClass(2.0, 1, "normal"),
        ]
        sp = jacobi_tube_spectrum(classes, t, "inward")
        r2 = math.sqrt(2.0)
        got = dict((round(v, 10), mult) for v, mult in sp.entries)
        assert got[round(-r2 * math.tan(r2 * t), 10)] == m - 1
        assert got[round(0.0, 10)] == m - 1
        assert got[round(r2 / math.tan(r2 * t), 10)] == 1
        assert sp.dimension() == 2 * m - 1

    def test_complex_projective_base_table(self):
        # tube over a half-dimensional complex projective space, inward:
        # 2 cot(2t), two zeros, -tan t and cot t with equal counts
        k, t = 3, 0.4
        classes = [
            TubeClass(4.0, 1, "normal"),
            TubeClass(0.0, 2, "tangent"),
            TubeClass(1.0, 2 * k - 2, "tangent"),
            TubeClass(1.0, 2 * k - 2, "normal"),
        ]
        sp = jacobi_tube_spectrum(classes, t, "inward")
        vals = dict((round(v, 10), mult) for v, mult in sp.entries)
        assert vals[round(2.0 / math.tan(2.0 * t), 10)] == 1
        assert vals[0.0] == 2
        assert vals[round(-math.tan(t), 10)] == 2 * k - 2
        assert vals[round(1.0 / math.tan(t), 10)] == 2 * k - 2

    def test_base_shape_eigenvalue_enters(self):
        # kappa = 0 tangent class with shape eigenvalue s: y = 1 - s r
        sp = jacobi_tube_spectrum([TubeClass(0.0, 1, "tangent", 0.25)], 1.0, "inward")
        assert abs(sp.entries[0][0] - (-0.25 / 0.75)) < 1e-12

    def test_focal_guard(self):
        with pytest.raises(FocalPointError):
            jacobi_tube_spectrum([TubeClass(1.0, 1, "normal")], math.pi, "inward")
        with pytest.raises(FocalPointError):
            jacobi_tube_spectrum([TubeClass(4.0, 1, "tangent")], math.pi / 4, "inward")

    def test_mean_curvature_is_trace(self):
        sp = jacobi_tube_spectrum([TubeClass(1.0, 3, "tangent", 0.5),
                                   TubeClass(0.0, 2, "tangent")], 0.2, "inward")
        assert abs(mean_curvature(sp) - sum(v * m for v, m in sp.entries)) < 1e-14


class TestDisplacementMaps:
    def test_identity_at_zero(self):
        a, cls = displace_isotropic(0.7, [(1.5, 2), (-0.3, 4)], 0.0)
        assert a == 0.7
        assert cls == [(1.5, 2), (-0.3, 4)]

    def test_composition_law(self):
        alpha, q = 0.9, [(2.0, 3), (-0.4, 2)]
        r, s = 0.17, 0.21
        one_step = displace_isotropic(alpha, q, math.tan(r + s))
        a1, q1 = displace_isotropic(alpha, q, math.tan(r))
        two_step = displace_isotropic(a1, q1, math.tan(s))
        assert abs(one_step[0] - two_step[0]) < 1e-10
        for (v1, m1), (v2, m2) in zip(one_step[1], two_step[1]):
            assert m1 == m2 and abs(v1 - v2) < 1e-10

    def test_q_map_is_cotangent_shift(self):
        theta, r = 1.1, 0.3
        lam = 1.0 / math.tan(theta)
        out = displace_q_eigenvalue(lam, math.tan(r))
        assert abs(out - 1.0 / math.tan(theta - r)) < 1e-12

    def test_reeb_map_is_double_angle_shift(self):
        theta, r = 0.55, 0.2
        alpha = 2.0 / math.tan(2.0 * theta)
        out = displace_reeb_eigenvalue(alpha, math.tan(r))
        assert abs(out - 2.0 / math.tan(2.0 * (theta - r))) < 1e-12

    def test_exact_arithmetic_passes_through(self):
        # tan(pi/8) = sqrt2 - 1 exactly; cot(3pi/8) = sqrt2 - 1 moves to
        # cot(3pi/8 - pi/8) = cot(pi/4) = 1
        tan_r = sqrtE(2) - ratE(1)
        out = displace_q_eigenvalue(sqrtE(2) - ratE(1), tan_r)
        assert out == ratE(1)

    def test_focal_displacement_raises(self):
        with pytest.raises(FocalPointError):
            displace_q_eigenvalue(1.0, 1.0)
        with pytest.raises(FocalPointError):
            displace_q_eigenvalue(sqrtE(2) + ratE(1), sqrtE(2) - ratE(1))


class TestMatrixEvolution:
    def test_initial_conditions(self):
        rn = np.diag([1.0, 4.0, 0.0])
        d0 = np.eye(3)
        d0p = -np.diag([0.5, 0.2, -1.0])
        d, dp = jacobi_evolution(rn, d0, d0p, 0.0)
        assert np.allclose(d, d0)
        assert np.allclose(dp, d0p)

    def test_scalar_agreement_on_diagonal_data(self):
        rn = np.diag([1.0, 4.0, 0.0])
        s = np.diag([0.7, 1.1, 0.0])
        r = 0.25
        s_r = parallel_shape_operator(rn, s, r, "outward")
        lam_q = displace_q_eigenvalue(0.7, math.tan(r))
        lam_xi = displace_reeb_eigenvalue(1.1, math.tan(r))
        assert abs(s_r[0, 0] - lam_q) < 1e-11
        assert abs(s_r[1, 1] - lam_xi) < 1e-11
        assert abs(s_r[2, 2]) < 1e-12

    def test_second_order_equation_residual(self):
        rng = np.random.default_rng(0)
        q = np.linalg.qr(rng.standard_normal((4, 4)))[0]
        rn = q @ np.diag([0.0, 1.0, 1.0, 4.0]) @ q.T
        d0 = np.eye(4)
        d0p = rng.standard_normal((4, 4))
        h = 1e-5
        r = 0.6
        d_m, _ = jacobi_evolution(rn, d0, d0p, r - h)
        d_0, _ = jacobi_evolution(rn, d0, d0p, r)
        d_p, _ = jacobi_evolution(rn, d0, d0p, r + h)
        second = (d_p - 2 * d_0 + d_m) / (h * h)
        assert np.allclose(second, -rn @ d_0, atol=1e-5)

    def test_focal_radius_detected(self):
        rn = np.diag([1.0, 1.0])
        s = np.diag([1.0, 0.3])  # eigenvalue 1 = cot(pi/4) focalizes at r = pi/4
        with pytest.raises(FocalPointError):
            parallel_shape_operator(rn, s, math.pi / 4.0, "outward")

    def test_geometric_parallel_matches_scalar_maps(self):
        # full pipeline: an isotropic Hopf datum displaced two ways
        m = 4
        d0 = isotropic_datum(m)
        alpha, lams = 1.3, [0.4, -2.0]
        S = phi_paired_shape(d0, alpha=alpha, lambdas=lams)
        data = HypersurfaceData(point=d0.point, normal=d0.normal, frame=d0.frame, shape=S)
        # normal Jacobi operator in the hypersurface frame
        k = 2 * m - 1
        rn = np.empty((k, k))
        images = [curvature(f, data.normal, data.normal) for f in data.frame]
        for i in range(k):
            for j in range(k):
                rn[i, j] = g(images[j], data.frame[i])
        rn = 0.5 * (rn + rn.T)
        r = 0.2
        s_r = parallel_shape_operator(rn, S, r, "outward")
        got = sorted(np.linalg.eigvalsh(s_r))
        mus = [(alpha * l + 2.0) / (2.0 * l - alpha) for l in lams]
        new_alpha, new_q = displace_isotropic(
            alpha, [(l, 1) for l in lams] + [(mu, 1) for mu in mus], math.tan(r))
        want = sorted([new_alpha, 0.0, 0.0] + [v for v, _ in new_q])
        assert np.allclose(got, want, atol=1e-9)


class TestConfigDisplacement:
    def _cp_tube(self, t, k=3):
        # tube over a half-dimensional complex projective space at radius t
        m = 2 * k
        classes = ((1.0 / math.tan(t), 2 * k - 2), (-math.tan(t), 2 * k - 2))
        return _Config(2.0 / math.tan(2.0 * t), classes, m)

    def test_displacement_grows_the_tube(self):
        t, r = 0.5, 0.2
        sp = parallel_config(self._cp_tube(t), r)
        want = self._cp_tube(t + r)
        assert abs(sp.alpha_r - want.alpha) < 1e-12
        assert sp.kernel_mult == 2
        got = sorted(sp.classes_r)
        expect = sorted(want.classes)
        for (v1, m1), (v2, m2) in zip(got, expect):
            assert m1 == m2 and abs(v1 - v2) < 1e-12

    def test_negative_displacement_shrinks(self):
        t, r = 0.7, -0.3
        sp = parallel_config(self._cp_tube(t), r)
        assert abs(sp.alpha_r - 2.0 / math.tan(2.0 * (t + r))) < 1e-12

    def test_composition_on_own_output(self):
        c = self._cp_tube(0.45)
        one = parallel_config(c, 0.31)
        two = parallel_config(parallel_config(c, 0.17), 0.14)
        assert abs(one.alpha_r - two.alpha_r) < 1e-10
        for (v1, m1), (v2, m2) in zip(sorted(one.classes_r), sorted(two.classes_r)):
            assert m1 == m2 and abs(v1 - v2) < 1e-10

    def test_mean_curvature_routes_agree(self):
        c = _Config(1.1, ((0.8, 3), (-0.25, 2), (2.2, 3)), 6)
        for r in (0.0, 0.15, -0.2, 0.4):
            sp = parallel_config(c, r)
            assert abs(mean_curvature(c, r) - sp.trace()) < 1e-10

    def test_dimension_counts_all_roles(self):
        sp = parallel_config(self._cp_tube(0.5, k=2), 0.1)
        assert sp.dimension() == 2 * 4 - 1

    def test_spectrum_without_reeb_value_refuses(self):
        sp = jacobi_tube_spectrum([TubeClass(0.0, 1, "normal")], 0.5)
        with pytest.raises(ValueError):
            parallel_config(sp, 0.1)

    def test_focal_displacement_raises(self):
        c = _Config(0.0, ((1.0, 2), (-1.0, 2)), 4)
        with pytest.raises(FocalPointError):
            parallel_config(c, -math.pi / 4.0)


class TestFocalData:
    def test_strict_case_formulas(self):
        fd = focal_data(_Config(0.0, [(2.0, 1), (0.5, 1)], 3), side="plus")
        assert not fd.fixed_point_case
        assert fd.lambda_star == 2.0
        assert abs(fd.distance - math.atan(0.5)) < 1e-15
        # Reeb value (4 + 0) * 2 / (4 - 0 - 1) = 8/3, class value (1+1)/(1.5)
        assert fd.dim == 4
        got = {round(v, 12): mult for v, mult in fd.spectrum}
        assert got == {0.0: 2, round(4.0 / 3.0, 12): 1, round(8.0 / 3.0, 12): 1}

    def test_focal_values_are_limits_of_parallel_maps(self):
        q = [(3.0, 2), (0.2, 1), (-1.4, 1)]
        fd = focal_data(_Config(0.8, q, 4), side="plus")
        L = fd.lambda_star
        t = 1.0 / L  # tan of the focal radius
        expect = {round(displace_reeb_eigenvalue(0.8, t), 9)}
        for lam, _ in q:
            if lam != L:
                expect.add(round(displace_q_eigenvalue(lam, t), 9))
        expect.add(0.0)
        assert {round(v, 9) for v, _ in fd.spectrum} == expect
        assert fd.dim == 2 * 4 - 1 - 2

    def test_fixed_point_case_drops_reeb_value(self):
        # eigenvalue exactly at the fixed point: alpha = 0 gives fixed point 1
        fd = focal_data(_Config(0.0, [(1.0, 2), (-0.5, 2)], 4), side="plus")
        assert fd.fixed_point_case
        assert fd.lambda_star == 1.0
        assert fd.dim == 2 * 4 - 1 - 2 - 1
        got = {round(v, 9): mult for v, mult in fd.spectrum}
        assert got == {0.0: 2, round(0.5 / 1.5, 9): 2}

    def test_minus_side_mirrors(self):
        fd = focal_data(_Config(0.0, [(2.0, 1), (-2.0, 1)], 3), side="minus")
        assert not fd.fixed_point_case
        assert fd.lambda_star == -2.0
        assert fd.distance < 0
        plus = focal_data(_Config(0.0, [(2.0, 1), (-2.0, 1)], 3), side="plus")
        assert np.allclose(sorted(v for v, _ in fd.spectrum),
                           sorted(-v for v, _ in plus.spectrum))

    def test_exact_fixed_point_collapse(self):
        # alpha = 2, eigenvalues cot(pi/8) and -tan(pi/8): the larger one
        # equals the Reeb fixed point 1 + sqrt2 and the focal set is
        # totally geodesic (all curvature values vanish)
        alpha = ratE(2)
        lam_hi = sqrtE(2) + ratE(1)
        lam_lo = ratE(1) - sqrtE(2)
        fd = focal_data(_Config(alpha, [(lam_hi, 2), (lam_lo, 2)], 4), side="plus")
        assert fd.fixed_point_case
        assert len(fd.spectrum) == 1
        value, mult = fd.spectrum[0]
        assert value.is_zero() and mult == 4
        assert fd.dim == 4
        assert fd.austere

    def test_exact_strict_case_stays_exact(self):
        half = ratE(1) / ratE(2)
        fd = focal_data(_Config(ratE(0), [(ratE(2), 1), (half, 1)], 3), side="plus")
        vals = sorted(fd.spectrum, key=lambda e: float(e[0]))
        assert vals[0][0].is_zero() and vals[0][1] == 2
        assert vals[1][0] == ratE(4) / ratE(3)
        assert vals[2][0] == ratE(8) / ratE(3)

    def test_merged_multiplicities_match_dimension(self):
        # 13/14 displaces onto the Reeb value 8/3 and -1/2 onto the kernel 0
        q = [(2.0, 1), (13.0 / 14.0, 2), (-0.5, 3)]
        fd = focal_data(_Config(0.0, q, 5), side="plus")
        assert sum(mult for _, mult in fd.spectrum) == fd.dim == 8
        got = {round(v, 12): mult for v, mult in fd.spectrum}
        assert got == {0.0: 5, round(8.0 / 3.0, 12): 3}


class TestAustere:
    def test_symmetric_float_multiset(self):
        assert austere_test([(0.0, 2), (1.5, 1), (-1.5, 1), (2.0, 3), (-2.0, 3)])

    def test_asymmetric_float_set(self):
        assert not austere_test([(-1.6881, 1), (4.1981, 1), (0.0, 1)])

    def test_multiplicity_mismatch_fails(self):
        assert not austere_test([(1.0, 2), (-1.0, 1)])

    def test_unmerged_entries_merge_first(self):
        assert austere_test([(1.0, 1), (1.0, 1), (-1.0, 2)])

    def test_exact_sets(self):
        from fractions import Fraction

        a = sqrtE(2)
        assert austere_test([(a, 3), (-a, 3), (ratE(0), 1)])
        assert not austere_test([(a, 1), (-a + ratE(Fraction(1, 10**9)), 1)])

    def test_empty(self):
        assert austere_test([])

    def test_sign_census(self):
        assert sign_census([(2.0, 5), (-1.0, 3), (0.0, 2), (3.0, 1)]) == (2, 1)
        assert sign_census([(sqrtE(2), 1), (-sqrtE(5), 2)]) == (1, 1)
