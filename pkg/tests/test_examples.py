"""Tests for the model-family constructors.

Every closed-form table is checked twice: once against frozen values
computed independently (trig identities evaluated by hand or exact
radical arithmetic), and once against the genuinely geometric route
(tube displacement of an explicit base, or the Lie-orbit shape formula)
at 1e-9.  The two routes share no curvature code beyond the ambient
tensor itself.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from qlab.exactnum import exact_sqrt, ratE
from qlab.examples import (
    CurvatureClass,
    ExampleConfig,
    base_tube_classes,
    distinct_spectrum,
    e1_config,
    e1_data,
    e1_recipe,
    e2_config,
    e2_data,
    e2_recipe,
    e3_config,
    e3_construct,
    e3_eigenspace_relations,
    e6_base_data,
    e6_recipe,
    e6_tube_config,
    e6_tube_data,
    pairing_value,
    _e6_normal_derivative,
    _eta_matrices,
    _h_family_matrices,
    _lie_gram_schmidt,
    _lie_ip,
    _so_exp,
)
from qlab.hypersurface import hopf_tests, spectrum, structure_tensors
from qlab.quadric import SingularType, g, normal_jacobi_spectrum, singular_type
from qlab.tube import (
    austere_test,
    focal_data,
    jacobi_tube_spectrum,
    mean_curvature,
    merge_multiset,
    parallel_config,
)

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)


def assert_multisets_close(got, want, tol=1e-9):
    got = sorted(((float(v), m) for v, m in got), key=lambda e: e[0])
    want = sorted(((float(v), m) for v, m in want), key=lambda e: e[0])
    assert [m for _, m in got] == [m for _, m in want]
    assert max(abs(a - b) for (a, _), (b, _) in zip(got, want)) <= tol


def merged(entries):
    return merge_multiset(tuple(entries))


class TestConfigTables:
    def test_e1_quarter_circle(self):
        # sqrt(2) t = pi/4 makes every value a unit: {sqrt2: 1, 0: 2, -sqrt2: 2}
        cfg = e1_config(math.pi / (4.0 * SQ2), 3)
        assert_multisets_close(cfg.entries(),
                               [(SQ2, 1), (0.0, 2), (-SQ2, 2)], tol=1e-12)
        assert cfg.normal_type is SingularType.A_PRINCIPAL

    def test_e2_quarter_merges_reeb_into_kernel(self):
        cfg = e2_config(math.pi / 4.0, 2)
        assert_multisets_close(distinct_spectrum(cfg),
                               [(-1.0, 2), (0.0, 3), (1.0, 2)], tol=1e-12)

    def test_e2_sixth(self):
        cfg = e2_config(math.pi / 6.0, 2)
        assert_multisets_close(cfg.entries(),
                               [(2.0 / SQ3, 1), (0.0, 2), (-1.0 / SQ3, 2), (SQ3, 2)],
                               tol=1e-12)

    def test_e3_sixth(self):
        cfg = e3_config(math.pi / 6.0, 2)
        assert_multisets_close(
            cfg.entries(),
            [(2.0 * SQ3, 1), (0.0, 2), (1.0 / SQ3, 2), (-SQ3, 2),
             (2.0 + SQ3, 2), (-(2.0 - SQ3), 2)],
            tol=1e-12)

    def test_e3_multiplicity_growth(self):
        cfg = e3_config(0.3, 3)
        assert sum(c.multiplicity for c in cfg.classes) == 2 * cfg.m - 1
        assert cfg.m == 10
        assert {c.multiplicity for c in cfg.classes} == {1, 2, 6}

    def test_e6_equal_masses_merge(self):
        # B = 1/2 makes both slopes 1, so the paired classes coincide
        cfg = e6_tube_config(3, 5, 0.5, 0.15)
        spec = distinct_spectrum(cfg)
        assert len(spec) == 4
        assert sorted(m for _, m in spec) == [1, 2, 3, 3]

    def test_e6_depends_on_base_mass(self):
        # the first paired value moves with B: these tubes are not isoparametric
        h = 1e-5
        hi = e6_tube_config(3, 5, 1.0 / 3.0 + h, 0.2).classes[2].value
        lo = e6_tube_config(3, 5, 1.0 / 3.0 - h, 0.2).classes[2].value
        slope = (hi - lo) / (2.0 * h)
        assert 0.1 < abs(slope) < 10.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            e1_config(1.2, 3)
        with pytest.raises(ValueError):
            e1_config(0.3, 2)
        with pytest.raises(ValueError):
            e2_config(0.3, 1)
        with pytest.raises(ValueError):
            e2_config(0.0, 2)
        with pytest.raises(ValueError):
            e3_config(math.pi / 3.0, 2)
        with pytest.raises(ValueError):
            e6_tube_config(3, 5, 0.03, 0.2)   # B below sin^2 r
        with pytest.raises(ValueError):
            e6_tube_config(3, 5, 0.99, 0.2)   # B above cos^2 r
        with pytest.raises(ValueError):
            e6_tube_config(1, 5, 0.5, 0.2)
        with pytest.raises(ValueError):
            e6_tube_config(6, 5, 0.5, 0.2)


class TestExactTables:
    def test_e1_exact_quarter(self):
        cfg = e1_config(math.pi / (4.0 * SQ2), 3, exact_tan=ratE(1))
        s2 = exact_sqrt(ratE(2))
        assert (cfg.alpha - s2).is_zero()
        assert (cfg.classes[2].value + s2).is_zero()

    def test_e2_exact_quarter(self):
        cfg = e2_config(math.pi / 4.0, 2, exact_tan=ratE(1))
        assert cfg.alpha.is_zero()
        assert (cfg.classes[2].value + 1).is_zero()
        assert (cfg.classes[3].value - 1).is_zero()

    def test_e3_exact_eighth(self):
        # tan(pi/8) = sqrt2 - 1
        s2 = exact_sqrt(ratE(2))
        cfg = e3_config(math.pi / 8.0, 2, exact_tan=s2 - 1)
        assert (cfg.alpha - 2).is_zero()
        assert (cfg.classes[4].value - (s2 + 1)).is_zero()
        assert (cfg.classes[5].value - (1 - s2)).is_zero()
        for exact, approx in zip(cfg.entries(), e3_config(math.pi / 8.0, 2).entries()):
            assert abs(float(exact[0]) - approx[0]) <= 1e-12
            assert exact[1] == approx[1]

    def test_e3_exact_sixth(self):
        s3 = exact_sqrt(ratE(3))
        cfg = e3_config(math.pi / 6.0, 2, exact_tan=1 / s3)
        assert (cfg.alpha - 2 * s3).is_zero()
        assert (cfg.classes[3].value + s3).is_zero()
        assert (cfg.classes[4].value - (2 + s3)).is_zero()
        assert (cfg.classes[5].value + (2 - s3)).is_zero()

    def test_e6_exact_tower(self):
        cfg = e6_tube_config(3, 5, 1.0 / 3.0, math.atan(0.2),
                             exact_B=Fraction(1, 3), exact_tan=ratE(Fraction(1, 5)))
        s2 = exact_sqrt(ratE(2))
        lam1 = cfg.classes[2].value
        assert (lam1 - (s2 - ratE(Fraction(1, 5))) / (1 + s2 * ratE(Fraction(1, 5)))).is_zero()
        # the pairing identity holds exactly across the whole table
        assert (pairing_value(lam1, cfg.alpha) - cfg.classes[3].value).is_zero()
        assert (pairing_value(cfg.classes[4].value, cfg.alpha)
                - cfg.classes[5].value).is_zero()

    def test_e6_exact_needs_mass(self):
        with pytest.raises(ValueError):
            e6_tube_config(3, 5, 1.0 / 3.0, 0.2, exact_tan=ratE(Fraction(1, 5)))


class TestValidation:
    def test_pairing_mismatch_rejected(self):
        classes = (
            CurvatureClass(1.0, 1, role="reeb"),
            CurvatureClass(2.0, 2, role="q", phi_image=2),
            CurvatureClass(0.9, 2, role="q", phi_image=1),
        )
        with pytest.raises(ValueError, match="pair"):
            ExampleConfig(family="E1", parameters={}, m=3, alpha=1.0,
                          classes=classes, normal_type=SingularType.A_PRINCIPAL)

    def test_multiplicity_sum_enforced(self):
        classes = (
            CurvatureClass(1.0, 1, role="reeb"),
            CurvatureClass(2.0, 3, role="q", phi_image=2),
            CurvatureClass(4.0 / 3.0, 3, role="q", phi_image=1),
        )
        with pytest.raises(ValueError, match="sum"):
            ExampleConfig(family="E1", parameters={}, m=3, alpha=1.0,
                          classes=classes, normal_type=SingularType.A_PRINCIPAL)

    def test_reeb_value_must_be_alpha(self):
        classes = (
            CurvatureClass(1.5, 1, role="reeb"),
            CurvatureClass(2.0, 2, role="q", phi_image=2),
            CurvatureClass(4.0 / 3.0, 2, role="q", phi_image=1),
        )
        with pytest.raises(ValueError, match="alpha"):
            ExampleConfig(family="E1", parameters={}, m=3, alpha=1.0,
                          classes=classes, normal_type=SingularType.A_PRINCIPAL)

    def test_principal_rejects_kernel(self):
        classes = (
            CurvatureClass(1.0, 1, role="reeb"),
            CurvatureClass(0.0, 2, role="kernel", phi_image=1),
            CurvatureClass(2.0, 1, role="q", phi_image=3),
            CurvatureClass(4.0 / 3.0, 1, role="q", phi_image=2),
        )
        with pytest.raises(ValueError, match="kernel"):
            ExampleConfig(family="E1", parameters={}, m=3, alpha=1.0,
                          classes=classes, normal_type=SingularType.A_PRINCIPAL)

    def test_pairing_breaks_down_on_the_diagonal(self):
        with pytest.raises(ZeroDivisionError):
            pairing_value(1.0, 2.0)

    def test_pairing_fixed_points(self):
        cfg = e2_config(0.4, 3)
        for idx in (2, 3):
            lam = cfg.classes[idx].value
            assert abs(pairing_value(lam, cfg.alpha) - lam) <= 1e-12
        cfg = e3_config(0.4, 2)
        assert abs(pairing_value(cfg.classes[2].value, cfg.alpha)
                   - cfg.classes[3].value) <= 1e-12


class TestE6Base:
    @pytest.mark.parametrize("k,m,B", [(3, 5, 1.0 / 3.0), (2, 3, 0.25), (4, 4, 0.4)])
    def test_shape_matches_table(self, k, m, B):
        base = e6_base_data(k, m, B)
        got = np.sort(np.linalg.eigvalsh(base.shape_matrix))
        want = np.sort(np.concatenate(
            [np.full(mult, val) for val, mult in base.shape_classes]))
        assert got.size == 2 * m - 2
        assert np.abs(got - want).max() <= 1e-9

    def test_flat_directions_span_real_structure_images(self):
        base = e6_base_data(3, 5, 0.3)
        assert np.abs(base.shape_matrix[:, :2]).max() <= 1e-10

    def test_mass_gradient_along_flat_directions(self):
        k, B = 3, 0.3
        base = e6_base_data(k, 5, B)
        z = base.point.z

        def mass_rate(x):
            return 2.0 * float(np.real(np.vdot(z[:k], x[:k])))

        assert abs(mass_rate(base.tangent_basis[0])
                   - 2.0 * math.sqrt(B * (1.0 - B))) <= 1e-12
        assert abs(mass_rate(base.tangent_basis[1])) <= 1e-12

    def test_normal_jacobi_table(self):
        base = e6_base_data(3, 5, 1.0 / 3.0)
        w = np.sort(normal_jacobi_spectrum(base.point, base.eta1))
        want = np.concatenate([np.zeros(3), np.ones(6), np.full(1, 4.0)])
        assert np.abs(w - want).max() <= 1e-10
        assert singular_type(base.eta1) is SingularType.A_ISOTROPIC

    def test_every_unit_normal_has_the_same_table(self):
        k = 3
        base = e6_base_data(k, 5, 1.0 / 3.0)
        basis = list(base.tangent_basis)
        n = len(basis)
        s2 = np.empty((n, n))
        for j, x in enumerate(basis):
            d = base.point.project_tangent(
                1j * _e6_normal_derivative(base.point.z, k, x))
            for i, y in enumerate(basis):
                s2[i, j] = -g(d, y)
        s2 = 0.5 * (s2 + s2.T)
        ref = np.sort(np.linalg.eigvalsh(base.shape_matrix))
        for theta in np.linspace(0.0, 2.0 * math.pi, 9):
            mix = math.cos(theta) * base.shape_matrix + math.sin(theta) * s2
            assert np.abs(np.sort(np.linalg.eigvalsh(mix)) - ref).max() <= 1e-10

    def test_shrinking_tube_recovers_base(self):
        base = e6_base_data(3, 5, 1.0 / 3.0)
        cfg = e6_tube_config(3, 5, 1.0 / 3.0, 1e-6)
        assert_multisets_close(cfg.entries()[1:], base.shape_classes, tol=1e-4)


class TestGeometricTubes:
    @pytest.mark.parametrize("m", [3, 5])
    @pytest.mark.parametrize("t", [math.pi / 8.0, math.pi / (4.0 * SQ2)])
    def test_e1_grid(self, m, t):
        assert_multisets_close(spectrum(e1_data(t, m)).as_multiset(),
                               merged(e1_config(t, m).entries()))

    @pytest.mark.parametrize("k", [2, 3])
    @pytest.mark.parametrize("t", [math.pi / 6.0, math.pi / 4.0, math.pi / 3.0])
    def test_e2_grid(self, k, t):
        assert_multisets_close(spectrum(e2_data(t, k)).as_multiset(),
                               merged(e2_config(t, k).entries()))

    @pytest.mark.parametrize("k,m,B,r", [(2, 3, 1.0 / 3.0, 0.2),
                                         (3, 5, 1.0 / 3.0, 0.2),
                                         (3, 5, 0.5, 0.15)])
    def test_e6_grid(self, k, m, B, r):
        data = e6_tube_data(e6_base_data(k, m, B), r)
        assert_multisets_close(spectrum(data).as_multiset(),
                               merged(e6_tube_config(k, m, B, r).entries()))

    def test_singular_types(self):
        assert singular_type(e1_data(0.4, 3).normal) is SingularType.A_PRINCIPAL
        assert singular_type(e2_data(0.4, 2).normal) is SingularType.A_ISOTROPIC
        tube = e6_tube_data(e6_base_data(3, 5, 1.0 / 3.0), 0.2)
        assert singular_type(tube.normal) is SingularType.A_ISOTROPIC

    def test_hopf_structure(self):
        for data in (e1_data(0.4, 3), e2_data(0.5, 2),
                     e6_tube_data(e6_base_data(3, 5, 1.0 / 3.0), 0.2)):
            for name, resid in hopf_tests(data).items():
                assert resid <= 1e-8, name
            st = structure_tensors(data)
            assert np.linalg.norm(data.frame[0] - st.xi) <= 1e-9

    def test_reeb_curvature_matches_table(self):
        t, k = 0.35, 2
        st = structure_tensors(e2_data(t, k))
        assert abs(st.alpha - 2.0 / math.tan(2.0 * t)) <= 1e-10


class TestJacobiCrossValidation:
    @pytest.mark.parametrize("name,recipe,data,r", [
        ("quadric base", e1_recipe(3), e1_data(math.pi / 8.0, 3), math.pi / 8.0),
        ("projective base", e2_recipe(2), e2_data(math.pi / 6.0, 2), math.pi / 6.0),
        ("cone slice", e6_recipe(e6_base_data(3, 5, 1.0 / 3.0)),
         e6_tube_data(e6_base_data(3, 5, 1.0 / 3.0), 0.2), 0.2),
    ])
    def test_scalar_route_matches_matrix_route(self, name, recipe, data, r):
        classes = base_tube_classes(*recipe)
        scalar = jacobi_tube_spectrum(classes, r, orientation="inward")
        assert_multisets_close(merged(scalar.entries),
                               spectrum(data).as_multiset())

    def test_e6_classes_match_hand_table(self):
        base = e6_base_data(3, 5, 1.0 / 3.0)
        got = sorted((round(c.kappa, 9), c.kind, round(c.base_eigenvalue, 9), c.mult)
                     for c in base_tube_classes(*e6_recipe(base)))
        want = sorted((round(c.kappa, 9), c.kind, round(c.base_eigenvalue, 9), c.mult)
                      for c in base.tube_classes)
        assert [(e[1], e[3]) for e in got] == [(e[1], e[3]) for e in want]
        assert max(abs(a[0] - b[0]) for a, b in zip(got, want)) <= 1e-9
        assert max(abs(a[2] - b[2]) for a, b in zip(got, want)) <= 1e-9

    def test_parallel_displacement_closes_in_the_family(self):
        t, r, k = 0.5, 0.25, 2
        moved = parallel_config(e2_config(t, k), r)
        assert_multisets_close(merged(moved.entries),
                               merged(e2_config(t + r, k).entries()), tol=1e-10)


class TestOrbitFamily:
    @pytest.mark.parametrize("k", [2, 3])
    def test_algebra_dimensions(self, k):
        raw = _h_family_matrices(k)
        onb = _lie_gram_schmidt(raw)
        assert len(onb) == 2 * k * k + k + 3
        for x in onb:
            assert np.abs(x + x.T).max() <= 1e-12
        gram = np.array([[_lie_ip(a, b) for b in onb] for a in onb])
        assert np.abs(gram - np.eye(len(onb))).max() <= 1e-10

    def test_bracket_closure_small_case(self):
        onb = _lie_gram_schmidt(_h_family_matrices(2))
        for a in onb:
            for b in onb:
                c = a @ b - b @ a
                rem = c - sum(_lie_ip(c, x) * x for x in onb)
                assert np.abs(rem).max() <= 1e-9

    @pytest.mark.parametrize("k", [2, 3])
    def test_normal_complement_orthogonal_to_orbit(self, k):
        onb = _lie_gram_schmidt(_h_family_matrices(k))
        etas = _eta_matrices(k)
        for i, e in enumerate(etas):
            assert abs(_lie_ip(e, e) - 1.0) <= 1e-12
            for f in etas[i + 1:]:
                assert abs(_lie_ip(e, f)) <= 1e-12
            assert max(abs(_lie_ip(e, x)) for x in onb) <= 1e-12

    @pytest.mark.parametrize("k", [2, 3])
    def test_singular_orbit_dimension(self, k):
        onb = _lie_gram_schmidt(_h_family_matrices(k))
        projs = []
        for x in onb:
            p = np.zeros_like(x)
            p[:2, 2:] = x[:2, 2:]
            p[2:, :2] = x[2:, :2]
            projs.append(p)
        assert len(_lie_gram_schmidt(projs)) == 8 * k - 7

    def test_one_parameter_rotation(self):
        eta1, _, _ = _eta_matrices(2)
        g1 = _so_exp(0.3 * eta1)
        g2 = _so_exp(0.5 * eta1)
        assert np.abs(g1 @ g1.T - np.eye(8)).max() <= 1e-12
        assert np.abs(g1 @ g2 - _so_exp(0.8 * eta1)).max() <= 1e-12

    @pytest.mark.parametrize("k", [2, 3])
    @pytest.mark.parametrize("t", [math.pi / 8.0, math.pi / 6.0, math.pi / 5.0])
    def test_orbit_spectrum_matches_table(self, k, t):
        orbit, data, cfg = e3_construct(k, t)
        assert data.frame.shape == (8 * k - 5, 4 * k)
        assert_multisets_close(spectrum(data).as_multiset(), merged(cfg.entries()))
        st = structure_tensors(data)
        assert abs(st.alpha - 2.0 * math.tan(2.0 * t)) <= 1e-9

    @pytest.mark.parametrize("t", [math.pi / 8.0, math.pi / 6.0, math.pi / 5.0])
    def test_eigenspace_relations_small_case(self, t):
        _, data, _ = e3_construct(2, t)
        rel = e3_eigenspace_relations(data)
        assert set(rel) == {"phi_swaps_pair", "first_fixed_point_j_invariant",
                            "second_fixed_point_j_invariant",
                            "a_maps_pair_into_fixed_points", "shape_kernel"}
        for name, resid in rel.items():
            assert resid <= 1e-8, name

    def test_eigenspace_relations_larger_case(self):
        _, data, _ = e3_construct(3, math.pi / 6.0)
        assert max(e3_eigenspace_relations(data).values()) <= 1e-8

    def test_orbit_datum_is_hopf_and_isotropic(self):
        _, data, _ = e3_construct(2, math.pi / 8.0)
        assert singular_type(data.normal) is SingularType.A_ISOTROPIC
        for name, resid in hopf_tests(data).items():
            assert resid <= 1e-8, name
        w = np.sort(normal_jacobi_spectrum(data.point, data.normal))
        want = np.concatenate([np.zeros(3), np.ones(8), np.full(1, 4.0)])
        assert np.abs(w - want).max() <= 1e-9

    def test_construct_domain(self):
        with pytest.raises(ValueError):
            e3_construct(4, 0.3)
        with pytest.raises(ValueError):
            e3_construct(2, 0.9)


class TestFocalIntegration:
    @pytest.mark.parametrize("t,k", [(math.pi / 6.0, 2), (math.pi / 5.0, 3)])
    def test_projective_tube_collapses_onto_its_base(self, t, k):
        fd = focal_data(e2_config(t, k), side="plus")
        assert fd.fixed_point_case
        assert fd.dim == 2 * k
        assert len(fd.spectrum) == 1
        val, mult = fd.spectrum[0]
        assert mult == 2 * k and abs(val) <= 1e-10
        assert abs(fd.distance - t) <= 1e-12

    def test_orbit_focal_sets_are_exactly_austere(self):
        s2 = exact_sqrt(ratE(2))
        s3 = exact_sqrt(ratE(3))
        for cfg in (e3_config(math.pi / 8.0, 2, exact_tan=s2 - 1),
                    e3_config(math.pi / 6.0, 2, exact_tan=1 / s3)):
            for side in ("plus", "minus"):
                fd = focal_data(cfg, side=side)
                assert austere_test(fd.spectrum)
                for val, _ in fd.spectrum:
                    assert (val * (val * val - 1)).is_zero()  # values are 0, 1, -1

    def test_focal_displacement_is_monotone(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            alpha = float(rng.uniform(0.0, 2.0))
            bound = 0.5 * (alpha + math.sqrt(alpha * alpha + 4.0))
            lams = np.sort(rng.uniform(-3.0, bound - 0.1, size=3))
            if np.min(np.diff(lams)) < 1e-3:
                continue
            imgs = (1.0 + bound * lams) / (bound - lams)
            assert np.all(np.diff(imgs) > 0.0)

    def test_pinned_mean_curvatures(self):
        assert abs(mean_curvature(e3_config(math.pi / 6.0, 2))
                   - 14.0 / SQ3) <= 1e-9
        assert abs(mean_curvature(e2_config(math.pi / 4.0, 2))) <= 1e-12
