import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcklab.charts import TangentVector, christoffel, covariant_derivative
from lcklab.foliations import (
    ComplexImmersion,
    complex_submanifold_mean_curvature,
    first_foliation_fibre,
    gauss_weingarten,
    h_P_residual,
    integrability_residual,
    isotropic_transversal_pair,
    lightlike_transversal,
    second_foliation_fibre,
)
from lcklab.lck import lee_data
from lcklab.models import HopfModel, flat_chart, hopf_chart, synthetic_null_structure, tricerri_chart
from lcklab.sampling import sample_hopf, sample_null_config, sample_pair_frame, sample_complement_vector
from lcklab.semieuclid import (
    FrameSubspace,
    SemiEuclideanForm,
    contains_span,
    inner,
    same_span,
    signature_of,
)

MODEL = HopfModel(n=2, s=1, lam=0.5)
MODEL_NEG = HopfModel(n=2, s=1, lam=0.5, region="-")
HOPF = hopf_chart(MODEL)
HOPF_NEG = hopf_chart(MODEL_NEG)


class TestFirstFoliation:
    def test_hopf_reference_fibre(self):
        fib = first_foliation_fibre(HOPF, np.array([0.0, 1.0]))
        assert fib.tangent.dim == 3
        assert fib.radical.dim == 0
        d = lee_data(HOPF, np.array([0.0, 1.0]))
        B = FrameSubspace.from_vectors(fib.form, [d.B.real_coords()])
        assert not contains_span(fib.tangent, B, tol=1e-9)
        assert signature_of(fib.form, fib.tangent).index == 2  # = 2s

    def test_negative_region_index(self):
        z = np.array([1.3 + 0.4j, 0.2 - 0.1j])
        fib = first_foliation_fibre(HOPF_NEG, z)
        assert signature_of(fib.form, fib.tangent).index == 1  # = 2s - 1

    def test_synthetic_null_fibre(self):
        syn = synthetic_null_structure(2, 1)
        fib = first_foliation_fibre(syn, np.zeros(2, dtype=complex))
        # tangent = span{B, e2, e4} in interleaved coordinates; oracle by
        # row reduction of omega = g(., e1+e3)
        expect = FrameSubspace.from_vectors(
            fib.form, [[1.0, 0, 1, 0], [0, 1.0, 0, 0], [0, 0, 0, 1.0]])
        assert same_span(fib.tangent, expect, tol=1e-9)
        B = lee_data(syn, np.zeros(2, dtype=complex)).B.real_coords()
        assert same_span(fib.radical, FrameSubspace.from_vectors(fib.form, [B]),
                         tol=1e-9)
        assert fib.screen.dim == 2
        assert fib.split_residual() < 1e-10
        # transversal normalization
        omega = fib.form.gram @ B
        N = fib.transversal.basis[0]
        assert abs(inner(fib.form, N, N)) < 1e-12
        assert float(omega @ N) == pytest.approx(1.0, abs=1e-12)

    def test_level_set_coherence(self):
        # the fibre annihilates the differential of |z|^2_{s,n}
        rng = np.random.default_rng(0)
        for _ in range(10):
            z = sample_hopf(MODEL, rng)
            fib = first_foliation_fibre(HOPF, z)
            db = np.empty(4)
            eps = np.array([-1.0, 1.0])
            db[0::2] = 2 * eps * z.real
            db[1::2] = 2 * eps * z.imag
            assert np.abs(fib.tangent.basis @ db).max() < 1e-9


class TestLightlikeTransversal:
    FORM = SemiEuclideanForm.standard(2, 4)
    B = np.array([1.0, 0.0, 1.0, 0.0])
    SCREEN = FrameSubspace.from_vectors(FORM, [[0, 1.0, 0, 0], [0, 0, 0, 1.0]])

    def omega(self):
        return self.FORM.gram @ self.B

    def test_worked_example(self):
        N = lightlike_transversal(self.FORM, self.omega(), self.B, self.SCREEN,
                                  np.array([1.0, 0, 0, 0]))
        assert np.allclose(N, [-0.5, 0, 0.5, 0], atol=1e-14)

    def test_scaling_invariance(self):
        N1 = lightlike_transversal(self.FORM, self.omega(), self.B, self.SCREEN,
                                   np.array([1.0, 0, 0, 0]))
        N2 = lightlike_transversal(self.FORM, self.omega(), self.B, self.SCREEN,
                                   np.array([5.0, 0, 0, 0]))
        assert np.allclose(N1, N2, atol=1e-14)

    def test_complement_independence(self):
        V = np.array([1.0, 0, 0, 0])
        N1 = lightlike_transversal(self.FORM, self.omega(), self.B, self.SCREEN, V)
        N2 = lightlike_transversal(self.FORM, self.omega(), self.B, self.SCREEN,
                                   V + 2.0 * self.B)
        assert np.allclose(N1, N2, atol=1e-14)

    def test_invalid_complement_rejected(self):
        # inside a valid screen complement, omega(V) = 0 forces V onto the
        # Lee line; reaching omega(V) = 0 off the line therefore signals a
        # bad screen, reported as an invalid complement
        with pytest.raises(ValueError):
            lightlike_transversal(self.FORM, self.omega(), self.B,
                                  FrameSubspace.zero(self.FORM),
                                  np.array([0.0, 1.0, 0.0, 0.0]))

    def test_non_orthogonal_v_rejected(self):
        with pytest.raises(ValueError):
            lightlike_transversal(self.FORM, self.omega(), self.B, self.SCREEN,
                                  np.array([1.0, 0.5, 0.0, 0.0]))


class TestGaussWeingarten:
    def test_hopf_totally_geodesic(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            z = sample_hopf(MODEL, rng)
            fib = first_foliation_fibre(HOPF, z)
            coeff = rng.standard_normal((2, 3))
            X = coeff[0] @ fib.tangent.basis
            Y = coeff[1] @ fib.tangent.basis
            sfd = gauss_weingarten(HOPF, fib, X, Y, fib.transversal.basis[0], z)
            assert np.abs(sfd.h).max() < 1e-6
            assert sfd.h_symmetry_residual < 1e-6

    def test_zero_lee_field_rejected(self):
        flat = flat_chart(2, 1)
        with pytest.raises(ValueError):
            first_foliation_fibre(flat, np.array([0.1, 0.2], dtype=complex))

    def test_h_is_extension_independent(self):
        # tensoriality: the transversal part of nabla_X Y is the same for
        # the metric projection extension and a Euclidean kernel extension
        rng = np.random.default_rng(9)
        z = sample_hopf(MODEL, rng)
        fib = first_foliation_fibre(HOPF, z)
        d = lee_data(HOPF, z)
        omega_z = fib.form.gram @ d.B.real_coords()
        Xr = rng.standard_normal(3) @ fib.tangent.basis
        Yr = rng.standard_normal(3) @ fib.tangent.basis

        def metric_ext(vec):
            def field(p):
                dp = lee_data(HOPF, p)
                om = HOPF.chart.real_form(p).gram @ dp.B.real_coords()
                return TangentVector.from_real_coords(
                    vec - (float(om @ vec) / dp.c) * dp.B.real_coords())
            return field

        def euclid_ext(vec):
            def field(p):
                dp = lee_data(HOPF, p)
                om = HOPF.chart.real_form(p).gram @ dp.B.real_coords()
                return TangentVector.from_real_coords(
                    vec - (float(om @ vec) / float(om @ om)) * om)
            return field

        def h_of(ext):
            nXY = covariant_derivative(HOPF.chart, ext(Xr), ext(Yr), z)
            return (float(omega_z @ nXY.real_coords()) / d.c) * d.B.real_coords()

        assert np.abs(h_of(metric_ext) - h_of(euclid_ext)).max() < 1e-6

    def test_null_case_coefficient_chain(self):
        # with omega(h) = 0 and h = C N_V, the normalization omega(N_V) = 1
        # makes C = omega(h); a synthetic perturbation is detected
        syn = synthetic_null_structure(2, 1)
        z = np.zeros(2, dtype=complex)
        fib = first_foliation_fibre(syn, z)
        X = fib.tangent.basis[1]
        Y = fib.tangent.basis[2]
        sfd = gauss_weingarten(syn, fib, X, Y, fib.transversal.basis[0], z)
        omega = fib.form.gram @ lee_data(syn, z).B.real_coords()
        C = float(omega @ sfd.h)
        assert abs(C) < 1e-12       # flat synthetic data: h = 0
        fake = sfd.h + 0.3 * fib.transversal.basis[0]
        assert float(omega @ fake) == pytest.approx(0.3, abs=1e-12)


class TestSecondFoliation:
    def test_hopf_positive_plane(self):
        fib = second_foliation_fibre(HOPF, np.array([0.0, 1.0]))
        assert np.allclose(fib.tangent.gram_restricted, 4.0 * np.eye(2), atol=1e-12)
        assert fib.radical.dim == 0

    def test_hopf_negative_plane(self):
        z = np.array([1.3, 0.2], dtype=complex)
        fib = second_foliation_fibre(HOPF_NEG, z)
        assert np.allclose(fib.tangent.gram_restricted, -4.0 * np.eye(2), atol=1e-12)
        # with the metric flipped by sign(c) the plane is Riemannian
        sig = signature_of(fib.form, fib.tangent)
        assert sig.as_tuple() == (0, 2, 0)

    def test_synthetic_null_plane_is_its_own_radical(self):
        syn = synthetic_null_structure(3, 1)
        fib = second_foliation_fibre(syn, np.zeros(3, dtype=complex))
        assert np.abs(fib.tangent.gram_restricted).max() < 1e-14
        assert same_span(fib.radical, fib.tangent)
        assert fib.tangent.dim == 2
        # decomposition closes: tangent + transversal spans everything
        total = FrameSubspace.from_vectors(
            fib.form, np.vstack([fib.tangent.basis, fib.transversal.basis]))
        assert total.dim == 6

    def test_integrability(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            z = sample_hopf(MODEL, rng)
            assert integrability_residual(HOPF, z) < 1e-5
        # out-of-hypothesis diagnostic on the nonparallel chart: reported,
        # and in fact small because the bracket closes there too
        tric = tricerri_chart(2, 1)
        val = integrability_residual(tric, np.array([0.3 + 1.1j, 0.4, -0.2j]))
        assert np.isfinite(val)

    def test_constant_synthetic_brackets_vanish(self):
        syn = synthetic_null_structure(2, 1)
        assert integrability_residual(syn, np.zeros(2, dtype=complex)) < 1e-12


class TestIsotropicPair:
    def _flat_config(self):
        form = SemiEuclideanForm.standard(2, 6)
        B = np.array([1.0, 0, 1, 0, 0, 0])
        A = np.array([0, -1.0, 0, -1, 0, 0])
        omega = form.gram @ B
        theta = form.gram @ A
        screen = FrameSubspace.from_vectors(form, [np.eye(6)[4], np.eye(6)[5]])
        return form, B, A, omega, theta, screen

    def test_worked_example(self):
        form, B, A, omega, theta, screen = self._flat_config()
        pair = isotropic_transversal_pair(form, omega, theta, A, B, screen,
                                          np.eye(6)[0], np.eye(6)[1])
        assert np.allclose(pair.N1, [0, 0.5, 0, -0.5, 0, 0], atol=1e-12)
        assert np.allclose(pair.N2, [-0.5, 0, 0.5, 0, 0, 0], atol=1e-12)
        assert float(theta @ pair.N1) == pytest.approx(1.0, abs=1e-12)
        assert float(omega @ pair.N2) == pytest.approx(1.0, abs=1e-12)
        assert float(theta @ pair.N2) == pytest.approx(0.0, abs=1e-12)
        assert float(omega @ pair.N1) == pytest.approx(0.0, abs=1e-12)
        for u in (pair.N1, pair.N2):
            for v in (pair.N1, pair.N2):
                assert abs(inner(form, u, v)) < 1e-12

    def test_frame_change_invariance(self):
        form, B, A, omega, theta, screen = self._flat_config()
        V1, V2 = np.eye(6)[0], np.eye(6)[1]
        pair = isotropic_transversal_pair(form, omega, theta, A, B, screen, V1, V2)
        W1, W2 = 2.0 * V1 + V2, 3.0 * V2
        other = isotropic_transversal_pair(form, omega, theta, A, B, screen, W1, W2)
        assert np.allclose(pair.N1, other.N1, atol=1e-12)
        assert np.allclose(pair.N2, other.N2, atol=1e-12)

    def test_degenerate_complement_rejected(self):
        form, B, A, omega, theta, screen = self._flat_config()
        V1 = np.eye(6)[0]
        with pytest.raises(ValueError):
            isotropic_transversal_pair(form, omega, theta, A, B, screen,
                                       V1, V1 + B)

    @given(st.integers(min_value=0, max_value=2**31 - 1),
           st.sampled_from([(3, 1), (4, 2)]))
    @settings(max_examples=80, deadline=None)
    def test_randomized_constraints(self, seed, dims):
        n, s = dims
        rng = np.random.default_rng(seed)
        cfg = sample_null_config(n, s, rng)
        V1, V2 = sample_pair_frame(cfg, rng)
        pair = isotropic_transversal_pair(cfg.form, cfg.omega, cfg.theta,
                                          cfg.A, cfg.B, cfg.screen, V1, V2)
        assert abs(float(cfg.theta @ pair.N1) - 1.0) < 1e-10
        assert abs(float(cfg.omega @ pair.N2) - 1.0) < 1e-10
        assert abs(float(cfg.theta @ pair.N2)) < 1e-10
        assert abs(float(cfg.omega @ pair.N1)) < 1e-10
        for u in (pair.N1, pair.N2):
            for v in (pair.N1, pair.N2):
                assert abs(inner(cfg.form, u, v)) < 1e-10
        if cfg.screen.dim:
            cross = cfg.screen.basis @ cfg.form.gram @ np.vstack([pair.N1, pair.N2]).T
            assert np.abs(cross).max() < 1e-10

    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_randomized_nv_normalization(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 5))
        s = int(rng.integers(1, n))
        cfg = sample_null_config(n, s, rng)
        V = sample_complement_vector(cfg, rng)
        # first-foliation screen
        from lcklab.sampling import _kernel
        tangent_rows = _kernel(cfg.omega.reshape(1, -1), 2 * n)
        qB, _ = np.linalg.qr(cfg.B.reshape(-1, 1))
        proj = tangent_rows - (tangent_rows @ qB) @ qB.T
        _, sv, vt = np.linalg.svd(proj, full_matrices=False)
        rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
        screen = FrameSubspace.from_vectors(cfg.form, vt[:rank])
        N = lightlike_transversal(cfg.form, cfg.omega, cfg.B, screen, V)
        assert abs(inner(cfg.form, N, N)) < 1e-10
        assert abs(float(cfg.omega @ N) - 1.0) < 1e-10


class TestHP:
    def test_hopf_vanishing(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            z = sample_hopf(MODEL, rng)
            assert h_P_residual(HOPF, z) < 1e-5

    def test_lee_derivatives_vanish_exactly(self):
        z = np.array([0.4 - 0.1j, 1.2 + 0.3j])
        gam = christoffel(HOPF.chart, z)
        Bf = lambda p: lee_data(HOPF, p).B
        Af = lambda p: lee_data(HOPF, p).A
        nAB = covariant_derivative(HOPF.chart, Af, Bf, z, gamma=gam)
        assert np.abs(nAB.components).max() < 1e-8
        nAA = covariant_derivative(HOPF.chart, Af, Af, z, gamma=gam)
        assert np.abs(nAA.components).max() < 1e-8

    def test_synthetic_constant_data(self):
        syn = synthetic_null_structure(3, 1)
        assert h_P_residual(syn, np.zeros(3, dtype=complex)) < 1e-12


class TestMeanCurvature:
    def line(self, c0, n=2):
        def chart_map(u):
            z = np.full(n, c0, dtype=complex)
            z[-1] = u[0]
            return z
        jac = np.zeros((n, 1), dtype=complex)
        jac[-1, 0] = 1.0
        return ComplexImmersion(m=1, chart_map=chart_map, tangent=lambda u: jac)

    def test_lee_tangent_line_is_minimal(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            u = 0.8 + 0.8 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            eq, mean = complex_submanifold_mean_curvature(HOPF, self.line(0.0), [u])
            assert eq < 1e-5
            assert mean < 1e-5

    def test_offset_line_law(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            u = (0.9 + 0.6 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            eq, mean = complex_submanifold_mean_curvature(HOPF, self.line(0.3), [u])
            assert eq < 1e-5
            assert mean < 1e-5

    def test_flat_linear_subspace(self):
        flat = flat_chart(2, 1)
        lin = ComplexImmersion(
            m=1, chart_map=lambda u: np.array([0.2 * u[0], u[0]]),
            tangent=lambda u: np.array([[0.2], [1.0]], dtype=complex))
        eq, mean = complex_submanifold_mean_curvature(flat, lin, [0.5 + 0.3j])
        assert eq == pytest.approx(0.0, abs=1e-12)
        assert mean == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_induced_metric_rejected(self):
        flat = flat_chart(2, 1)
        # the diagonal line through the cone direction has null tangent
        bad = ComplexImmersion(
            m=1, chart_map=lambda u: np.array([u[0], u[0]]),
            tangent=lambda u: np.array([[1.0], [1.0]], dtype=complex))
        with pytest.raises(ValueError):
            complex_submanifold_mean_curvature(flat, bad, [0.5])

    def test_fd_jacobian_path(self):
        # immersion without an analytic tangent map goes through central
        # differences and must agree
        line = ComplexImmersion(m=1, chart_map=lambda u: np.array([0.3 + 0j, u[0]]))
        eq, mean = complex_submanifold_mean_curvature(HOPF, line, [1.1 - 0.2j])
        assert eq < 1e-5
        assert mean < 1e-5


def test_torus_fibre_minimality():
    # fibres of the projective submersion are tangent to span{A, B}, which
    # contains the Lee field, so the mean-curvature law forces H = 0: the
    # Lee-tangent complex line realizes a fibre direction through the point
    rng = np.random.default_rng(6)
    z = sample_hopf(MODEL, rng)
    d = lee_data(HOPF, z)
    fib = second_foliation_fibre(HOPF, z)
    B = FrameSubspace.from_vectors(fib.form, [d.B.real_coords()])
    assert contains_span(fib.tangent, B, tol=1e-9)
