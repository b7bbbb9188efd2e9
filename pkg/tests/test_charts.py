import numpy as np
import pytest

from lcklab.charts import (
    ChartDomainError,
    TangentVector,
    christoffel,
    conformal_connection_shift,
    covariant_derivative,
    exterior_derivative_1form,
    exterior_derivative_2form,
    gradient,
    kahler_form,
    lie_bracket,
    metric_inner,
)
from lcklab.lck import lee_data, lee_field
from lcklab.models import (
    HopfModel,
    flat_chart,
    halfplane_kahler_chart,
    hopf_chart,
    tricerri_chart,
)
from lcklab.sampling import sample_hopf, sample_tricerri

HOPF = hopf_chart(HopfModel(n=2, s=1, lam=0.5))
FLAT = flat_chart(2, 1)
TRIC = tricerri_chart(2, 1)
Z01 = np.array([0.0, 1.0], dtype=complex)


class TestTangentVector:
    def test_real_coords_round_trip(self):
        v = TangentVector.real([1 + 2j, -0.5j])
        assert np.allclose(v.real_coords(), [1.0, 2.0, 0.0, -0.5])
        back = TangentVector.from_real_coords(v.real_coords())
        assert np.allclose(back.hol, v.hol)

    def test_j_squares_to_minus_one(self):
        v = TangentVector.real([0.3 - 1j, 2.0])
        jj = v.j().j()
        assert np.allclose(jj.components, -v.components)

    def test_real_gram_matches_hermitian_pairing(self):
        rng = np.random.default_rng(5)
        z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
        G = HOPF.chart.real_gram(z)
        H = HOPF.chart.hermitian(z)
        for _ in range(10):
            u = TangentVector.real(rng.standard_normal(2) + 1j * rng.standard_normal(2))
            v = TangentVector.real(rng.standard_normal(2) + 1j * rng.standard_normal(2))
            lhs = u.real_coords() @ G @ v.real_coords()
            rhs = 2.0 * (u.hol @ H @ v.hol.conj()).real
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestChartInvariants:
    @pytest.mark.parametrize("lck,sampler", [
        (HOPF, lambda rng: sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)),
        (TRIC, lambda rng: sample_tricerri(2, rng)),
        (FLAT, lambda rng: rng.standard_normal(2) + 1j * rng.standard_normal(2)),
    ])
    def test_hermitian_components(self, lck, sampler):
        rng = np.random.default_rng(31)
        for _ in range(10):
            z = sampler(rng)
            H = lck.chart.hermitian(z)
            assert np.abs(H - H.conj().T).max() < 1e-12

    def test_real_signature_at_samples(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
            HOPF.chart.real_form(z)  # constructor asserts signature (2, 2)

    def test_real_vector_pairs_real_with_real_form(self):
        rng = np.random.default_rng(33)
        from lcklab.lck import lee_form_components
        z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
        omega = lee_form_components(HOPF, z)
        for _ in range(10):
            v = TangentVector.real(rng.standard_normal(2) + 1j * rng.standard_normal(2))
            assert abs(complex(omega @ v.components).imag) < 1e-12


class TestChristoffel:
    def test_flat_vanishes(self):
        cc = christoffel(FLAT.chart, np.array([0.3 + 1j, -2.0]))
        assert np.abs(cc.gamma).max() == 0.0

    def test_hopf_value_at_reference_point(self):
        # Gamma^2_{22} = -(a/2|z|^2)(2 eps_2 zbar_2) = -1 at z = (0, 1)
        cc = christoffel(HOPF.chart, Z01)
        assert cc.gamma[1, 1, 1] == pytest.approx(-1.0, abs=1e-14)
        # Gamma^2bar_{2 2bar} = (a/2)(eps_2 zbar_2 - eps_2 zbar_2) = 0
        assert cc.gamma[3, 1, 3] == pytest.approx(0.0, abs=1e-14)

    def test_hopf_fd_oracle_agreement(self):
        rng = np.random.default_rng(11)
        model = HopfModel(n=2, s=1, lam=0.5)
        for _ in range(20):
            z = sample_hopf(model, rng)
            cc = christoffel(HOPF.chart, z, derivatives="fd")
            rel = np.abs(cc.gamma - cc.solved).max() / max(1.0, np.abs(cc.gamma).max())
            assert rel < 1e-6

    def test_tricerri_displayed_coefficients(self):
        p = np.array([0.7 + 1.4j, 0.3 - 0.2j, 1.1 + 0.9j])
        v = 1.4
        cc = christoffel(TRIC.chart, p)
        m = 3
        for j in (1, 2):
            assert cc.gamma[j, j, 0] == pytest.approx(-0.25j / v, abs=1e-14)
            assert cc.gamma[j, j, m] == pytest.approx(0.25j / v, abs=1e-14)
        # the half-space block carries its own nonzero coefficient, so the
        # displayed pair is not the whole connection
        assert abs(cc.gamma[0, 0, 0] - 1j / v) < 1e-14

    def test_tricerri_fd_oracle_agreement(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            p = sample_tricerri(2, rng)
            cc = christoffel(TRIC.chart, p, derivatives="fd")
            assert np.abs(cc.gamma - cc.solved).max() < 1e-6

    def test_symmetry_and_conjugation(self):
        rng = np.random.default_rng(13)
        z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
        cc = christoffel(HOPF.chart, z, derivatives="fd")
        assert cc.symmetry_residual() < 1e-12
        assert cc.conjugation_residual() < 1e-12

    def test_domain_error(self):
        with pytest.raises(ChartDomainError):
            christoffel(HOPF.chart, np.array([1.0, 1.0], dtype=complex))


class TestCovariantDerivative:
    def test_flat_constant_field(self):
        Y = TangentVector.real([1.0, 2.0])
        out = covariant_derivative(FLAT.chart, TangentVector.real([1, 0]), Y,
                                   np.array([0.1, 0.2], dtype=complex))
        assert np.abs(out.components).max() == 0.0

    def test_hopf_lee_field_parallel(self):
        B = lee_field(HOPF)
        rng = np.random.default_rng(14)
        z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
        for j in range(2):
            X = TangentVector.complexified(np.eye(2)[j], np.zeros(2))
            out = covariant_derivative(HOPF.chart, X, B, z)
            assert np.abs(out.components).max() < 1e-8

    def test_tricerri_lee_derivative(self):
        B = lee_field(TRIC)
        p = np.array([0.4 + 1.1j, 0.2 + 0.5j, -0.6 + 0.1j])
        X = TangentVector.complexified(np.eye(3)[1], np.zeros(3))
        out = covariant_derivative(TRIC.chart, X, B, p)
        expect = np.zeros(6, dtype=complex)
        expect[1] = 0.5
        assert np.abs(out.components - expect).max() < 1e-9


class TestGradient:
    def test_flat_euclidean_coordinate(self):
        chart = flat_chart(1, 0).chart   # real plane as a 1-dim complex chart
        g = gradient(chart, lambda p: p[0].real, np.array([0.2 + 0.1j]))
        assert np.allclose(g.real_coords(), [1.0, 0.0], atol=1e-10)

    def test_defining_identity_indefinite(self):
        rng = np.random.default_rng(15)
        z = np.array([0.4 - 0.3j, 1.2 + 0.5j])
        f = lambda p: p[0].real
        g = gradient(FLAT.chart, f, z)
        for _ in range(10):
            X = TangentVector.real(rng.standard_normal(2) + 1j * rng.standard_normal(2))
            # directional derivative of Re(z1) along X is Re(X^1)
            lhs = metric_inner(FLAT.chart, z, g, X)
            assert lhs == pytest.approx(X.hol[0].real, abs=1e-9)

    def test_hopf_log_norm_gradient_is_minus_lee(self):
        rng = np.random.default_rng(16)
        z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
        f = lambda p: np.log(abs(-abs(p[0]) ** 2 + abs(p[1]) ** 2))
        g = gradient(HOPF.chart, f, z)
        B = lee_data(HOPF, z).B
        assert np.abs(g.components + B.components).max() < 1e-8


class TestLieBracket:
    def test_constant_fields(self):
        X = TangentVector.real([1.0, 0.0])
        Y = TangentVector.real([0.0, 1.0])
        out = lie_bracket(X, Y, np.array([0.3, 0.4], dtype=complex))
        assert np.abs(out.components).max() == 0.0

    def test_plane_example(self):
        # X = x2 d/dx1, Y = d/dx2 on R^2: [X, Y] = -d/dx1
        X = lambda p: TangentVector.real([p[0].imag])
        Y = lambda p: TangentVector.real([1j])
        out = lie_bracket(X, Y, np.array([0.7 + 0.2j]))
        assert np.abs(out.components - TangentVector.real([-1.0]).components).max() < 1e-10

    def test_hopf_lee_plane_closed(self):
        z = np.array([0.1 + 0.2j, 1.3 - 0.1j])
        A = lambda p: lee_data(HOPF, p).A
        B = lambda p: lee_data(HOPF, p).B
        out = lie_bracket(A, B, z)
        # bracket of the commuting scaling/rotation flows vanishes
        assert np.abs(out.components).max() < 1e-8


class TestExteriorDerivative:
    def test_flat_kahler_form_closed(self):
        omega = kahler_form(FLAT.chart)
        d = exterior_derivative_2form(omega, np.array([0.2 + 0.1j, -0.4 + 0.9j]))
        assert np.abs(d).max() < 1e-12

    def test_halfplane_kahler_form_closed(self):
        aux = halfplane_kahler_chart(2, 1)
        omega = kahler_form(aux.chart)
        d = exterior_derivative_2form(omega, np.array([0.3 + 0.8j, 0.5, -0.2j]))
        assert np.abs(d).max() < 1e-6

    def test_conformal_rescaling_breaks_closedness(self):
        base = kahler_form(FLAT.chart)
        scaled = lambda p: np.exp(p[0].real) * base(p)
        d = exterior_derivative_2form(scaled, np.array([1.0, 1.0], dtype=complex))
        assert np.abs(d).max() > 0.1

    def test_d_squared_vanishes(self):
        rng = np.random.default_rng(17)
        coeff = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))

        def alpha(p):
            w = np.concatenate([p, p.conj()])
            return coeff @ w + (w ** 2) @ coeff.T

        def dalpha(p):
            return exterior_derivative_1form(alpha, p)

        z = np.array([0.3 - 0.2j, 0.6 + 0.4j])
        dd = exterior_derivative_2form(dalpha, z)
        assert np.abs(dd).max() < 1e-5


class TestConformalShift:
    def test_constant_factor_is_identity(self):
        z = np.array([0.5 + 0.2j, 1.1 - 0.7j])
        X = TangentVector.real([1.0, 0.5j])
        Y = TangentVector.real([0.2, -1.0])
        base = covariant_derivative(HOPF.chart, X, Y, z)
        shifted = conformal_connection_shift(HOPF.chart, lambda p: 3.7, X, Y, z)
        assert np.abs(base.components - shifted.components).max() < 1e-12

    def test_halfplane_rescaling_reproduces_family_connection(self):
        # rescaling the auxiliary Kahler metric by Im(w) gives the family
        # metric, so the shift with f = -log Im(w) must reproduce its
        # connection coefficients applied to (X, Y)
        aux = halfplane_kahler_chart(2, 1)
        p = np.array([0.4 + 1.2j, 0.8 - 0.1j, 0.3 + 0.6j])
        rng = np.random.default_rng(18)
        f = lambda q: -np.log(q[0].imag)
        gam = christoffel(TRIC.chart, p).gamma
        for _ in range(5):
            X = TangentVector.real(rng.standard_normal(3) + 1j * rng.standard_normal(3))
            Y = TangentVector.real(rng.standard_normal(3) + 1j * rng.standard_normal(3))
            shifted = conformal_connection_shift(aux.chart, f, X, Y, p)
            expect = np.einsum("abc,b,c->a", gam, X.components, Y.components)
            assert np.abs(shifted.components - expect).max() < 1e-6

    def test_hopf_rescaling_flattens(self):
        # |z|^2 g is the flat metric, so shifting with the local conformal
        # factor -log |z|^2 must kill the connection on constant fields
        rng = np.random.default_rng(19)
        z = sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)
        f = lambda p: -np.log(abs(-abs(p[0]) ** 2 + abs(p[1]) ** 2))
        X = TangentVector.real(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        Y = TangentVector.real(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        shifted = conformal_connection_shift(HOPF.chart, f, X, Y, z)
        assert np.abs(shifted.components).max() < 1e-7


class TestMetricCompatibility:
    @pytest.mark.parametrize("lck,sampler", [
        (HOPF, lambda rng: sample_hopf(HopfModel(n=2, s=1, lam=0.5), rng)),
        (TRIC, lambda rng: sample_tricerri(2, rng)),
    ])
    def test_compatibility_and_torsion(self, lck, sampler):
        rng = np.random.default_rng(20)
        from lcklab.charts import _metric_derivative_tensor, fd_step, wirtinger_derivative
        chart = lck.chart
        n = chart.n
        for _ in range(10):
            z = sampler(rng)
            gam = christoffel(chart, z)
            X = TangentVector.real(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            Y = TangentVector.real(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            W = TangentVector.real(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            G = chart.gram_full(z)
            nXY = covariant_derivative(chart, X, Y, z, gamma=gam)
            nXW = covariant_derivative(chart, X, W, z, gamma=gam)
            rhs = complex(nXY.components @ G @ W.components
                          + Y.components @ G @ nXW.components)
            # finite-difference lhs
            gYW = lambda p: np.array([Y.components @ chart.gram_full(p) @ W.components])
            d_dz, d_dzb = wirtinger_derivative(gYW, z, fd_step(z))
            df = np.concatenate([d_dz.ravel(), d_dzb.ravel()])
            assert abs(complex(df @ X.components) - rhs) < 1e-6
            # analytic lhs from the chart's metric derivative tensor
            T = _metric_derivative_tensor(chart, z, use_analytic=True)
            lhs = complex(np.einsum("ecd,e,c,d->", T, X.components,
                                    Y.components, W.components))
            assert abs(lhs - rhs) < 1e-9
