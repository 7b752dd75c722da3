import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as hst

from wqe import linalg as la
from wqe import states as st
from wqe.states import RngStream


def herm(d, gen):
    return st.sample_hermitian(d, gen)


class TestPredicates:
    def test_check_hermitian_accepts_and_symmetrises(self, gen):
        h = herm(4, gen)
        out = la.check_hermitian(h + 1e-15 * gen.standard_normal((4, 4)))
        assert np.array_equal(out, out.conj().T)

    def test_check_hermitian_rejects(self, gen):
        g = st.ginibre(3, 3, gen)
        with pytest.raises(la.NotHermitianError):
            la.check_hermitian(g)

    def test_non_square(self):
        with pytest.raises(la.ShapeError):
            la.as_square(np.zeros((2, 3)))

    def test_trace_product_and_hermitian_trace(self, gen):
        a, b = herm(5, gen), herm(5, gen)
        assert la.trace_product(a, b) == pytest.approx(np.trace(a @ b))
        t = la.hermitian_trace(a, b)
        assert isinstance(t, float) and t == pytest.approx(np.trace(a @ b).real)

    def test_commutator_norm(self, gen):
        a = herm(3, gen)
        assert la.commutator_norm(a, a @ a) < 1e-12
        assert la.commutator_norm(a, herm(3, gen)) > 1e-3


class TestEig:
    @pytest.mark.parametrize("method", ["lapack", "jacobi"])
    @pytest.mark.parametrize("d", [1, 2, 5, 12])
    def test_reconstruct_sorted_orthonormal(self, gen, method, d):
        a = herm(d, gen)
        dec = la.hermitian_eig(a, method=method)
        assert np.all(np.diff(dec.eigenvalues) <= 0)
        np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-12)
        np.testing.assert_allclose(dec.eigenvectors.conj().T @ dec.eigenvectors, np.eye(d), atol=1e-12)

    def test_phase_convention(self, gen):
        dec = la.hermitian_eig(herm(6, gen))
        for col in dec.eigenvectors.T:
            k = int(np.argmax(np.abs(col)))
            assert abs(col[k].imag) < 1e-14 and col[k].real > 0

    def test_jacobi_matches_lapack(self, gen):
        a = herm(8, gen)
        l1 = la.hermitian_eig(a).eigenvalues
        l2 = la.hermitian_eig(a, method="jacobi").eigenvalues
        np.testing.assert_allclose(l1, l2, atol=1e-12)
        # nondegenerate spectrum: same vectors after the phase convention
        v1 = la.hermitian_eig(a).eigenvectors
        v2 = la.jacobi_eig(a).eigenvectors
        np.testing.assert_allclose(v1, v2, atol=1e-9)

    def test_jacobi_diagonal_and_degenerate(self):
        a = np.diag([1.0, 3.0, 3.0, -2.0]).astype(complex)
        dec = la.jacobi_eig(a)
        np.testing.assert_allclose(dec.eigenvalues, [3, 3, 1, -2])
        np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-14)

    def test_unknown_method(self, gen):
        with pytest.raises(la.LinalgError):
            la.hermitian_eig(herm(2, gen), method="qr")


class TestMatrixFunctions:
    def test_exp_log_match_scipy(self, gen):
        h = herm(4, gen)
        np.testing.assert_allclose(la.matrix_func(h, "exp"), scipy.linalg.expm(h), atol=1e-12)
        rho = st.sample_density(4, rng=gen)
        np.testing.assert_allclose(la.matrix_func(rho, "log"), scipy.linalg.logm(rho), atol=1e-9)

    def test_log_outside_domain(self, gen):
        with pytest.raises(la.DomainError):
            la.matrix_func(np.diag([1.0, -0.5]), "log")

    def test_unknown_function(self):
        with pytest.raises(la.LinalgError):
            la.scalar_function("cosh")

    def test_xlogx_singular(self):
        rho = np.diag([0.5, 0.5, 0.0])
        x = la.xlogx_matrix(rho)
        np.testing.assert_allclose(np.diag(x).real, [0.5 * math.log(0.5)] * 2 + [0.0], atol=1e-15)

    def test_log_on_support_zero_off_support(self):
        rho = np.diag([0.25, 0.75, 0.0]).astype(complex)
        lg = la.log_on_support(rho)
        np.testing.assert_allclose(np.diag(lg).real, [math.log(0.25), math.log(0.75), 0.0])

    def test_sqrt_psd(self, gen):
        w = st.sample_weight(5, gen)
        s = la.sqrt_psd(w)
        np.testing.assert_allclose(s @ s, w, atol=1e-12)
        assert np.linalg.eigvalsh(s)[0] > 0

    def test_sqrt_rejects_negative(self):
        with pytest.raises(la.NotPSDError):
            la.sqrt_psd(np.diag([1.0, -1e-3]))

    def test_support_info(self):
        a = np.diag([2.0, 1.0, 0.0]).astype(complex)
        info = la.support_info(a)
        assert info.rank == 2
        np.testing.assert_allclose(info.pseudo_inverse, np.diag([0.5, 1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(info.projector, np.diag([1.0, 1.0, 0.0]), atol=1e-15)


class TestTensorAlgebra:
    def test_partial_trace_of_product(self, gen):
        a, b, c = (st.sample_density(k, rng=gen) for k in (2, 3, 2))
        abc = la.tensor(a, b, c)
        np.testing.assert_allclose(la.partial_trace(abc, [2, 3, 2], [0]), a, atol=1e-14)
        np.testing.assert_allclose(la.partial_trace(abc, [2, 3, 2], [1]), b, atol=1e-14)
        np.testing.assert_allclose(la.partial_trace(abc, [2, 3, 2], [0, 2]), la.tensor(a, c), atol=1e-14)

    def test_keep_order_is_original(self, gen):
        a, c = st.sample_density(2, rng=gen), st.sample_density(3, rng=gen)
        m = la.tensor(a, np.eye(2) / 2, c)
        np.testing.assert_allclose(la.partial_trace(m, [2, 2, 3], [2, 0]), la.tensor(a, c), atol=1e-14)

    def test_trace_preserved(self, gen):
        rho = st.sample_density(12, rng=gen)
        for keep in ([0], [1], [0, 1]):
            assert np.trace(la.partial_trace(rho, [3, 4], keep)).real == pytest.approx(1.0)

    def test_bad_dims(self, gen):
        with pytest.raises(la.ShapeError):
            la.partial_trace(np.eye(6), [2, 2], [0])

    def test_permute_factors(self, gen):
        a, b = st.sample_density(2, rng=gen), st.sample_density(3, rng=gen)
        np.testing.assert_allclose(la.permute_factors(la.tensor(a, b), [2, 3], [1, 0]),
                                   la.tensor(b, a), atol=1e-15)


class TestKernels:
    def test_lieb_T_scalar_identity(self, gen):
        b = herm(3, gen)
        np.testing.assert_allclose(la.lieb_T(2.0 * np.eye(3), b), b / 2, atol=1e-14)

    def test_lieb_T_commuting_is_b_over_a(self, gen):
        a = np.diag([0.5, 2.0, 3.0]).astype(complex)
        b = np.diag([1.0, -1.0, 4.0]).astype(complex)
        np.testing.assert_allclose(la.lieb_T(a, b), np.diag([2.0, -0.5, 4 / 3]), atol=1e-14)

    def test_lieb_T_trace_identity(self, gen):
        a = st.sample_weight(4, gen)
        # tr T_a(a) = tr 1 and tr T_a(b) = tr a^-1 b
        assert np.trace(la.lieb_T(a, a)).real == pytest.approx(4.0)
        b = herm(4, gen)
        assert np.trace(la.lieb_T(a, b)).real == pytest.approx(np.trace(np.linalg.inv(a) @ b).real)

    def test_lieb_T_requires_pd(self):
        with pytest.raises(la.DomainError):
            la.lieb_T(np.diag([1.0, 0.0]), np.eye(2))

    def test_lieb_T_near_degenerate_continuous(self):
        b = np.array([[1.0, 0.3], [0.3, -1.0]], dtype=complex)
        base = la.lieb_T(np.diag([1.0, 1.0]), b)
        near = la.lieb_T(np.diag([1.0 + 1e-9, 1.0]), b)
        np.testing.assert_allclose(base, near, atol=1e-8)

    def test_k_w_commuting_reduces_to_w_exp(self):
        z = np.diag([0.3, -1.0]).astype(complex)
        w = np.diag([2.0, 5.0]).astype(complex)
        np.testing.assert_allclose(la.k_w(z, w), w @ scipy.linalg.expm(z), atol=1e-14)

    def test_k_w_identity_weight(self, gen):
        z = herm(4, gen)
        np.testing.assert_allclose(la.k_w(z, np.eye(4)), scipy.linalg.expm(z), atol=1e-12)

    def test_k_w_matches_series_and_quadrature(self, gen):
        z, w = herm(3, gen), st.sample_weight(3, gen)
        k = la.k_w(z, w)
        np.testing.assert_allclose(k, la.k_w_series(z, w), atol=1e-9)
        np.testing.assert_allclose(k, la.quad_oracle("k_w", z, w), rtol=1e-6, atol=1e-10)

    def test_lieb_T_matches_quadrature(self, gen):
        a, b = st.sample_weight(3, gen), herm(3, gen)
        np.testing.assert_allclose(la.lieb_T(a, b), la.quad_oracle("lieb_T", a, b), atol=1e-8)

    def test_oracle_kind(self):
        with pytest.raises(la.LinalgError):
            la.quad_oracle("nope", np.eye(2), np.eye(2))


@settings(max_examples=40, deadline=None)
@given(seed=hst.integers(0, 2**32 - 1), d=hst.integers(1, 6))
def test_eig_reconstruction_property(seed, d):
    a = herm(d, RngStream(seed).generator())
    dec = la.hermitian_eig(a)
    assert np.linalg.norm(dec.reconstruct() - a) <= 1e-12 * max(1.0, np.linalg.norm(a))


@settings(max_examples=40, deadline=None)
@given(seed=hst.integers(0, 2**32 - 1), da=hst.integers(2, 4), db=hst.integers(2, 4))
def test_partial_trace_linear_and_positive(seed, da, db):
    gen = RngStream(seed).generator()
    r1, r2 = st.sample_density(da * db, rng=gen), st.sample_density(da * db, rng=gen)
    pa = la.partial_trace(0.3 * r1 + 0.7 * r2, [da, db], [0])
    np.testing.assert_allclose(pa, 0.3 * la.partial_trace(r1, [da, db], [0])
                               + 0.7 * la.partial_trace(r2, [da, db], [0]), atol=1e-14)
    assert np.linalg.eigvalsh(pa)[0] > -1e-14
