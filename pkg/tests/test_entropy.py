import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from wqe import entropy as en
from wqe import linalg as la
from wqe import states as st
from wqe.entropy import TraceMode
from wqe.states import RngStream


def d(*x):
    return np.diag(np.asarray(x, dtype=float)).astype(complex)


class TestWorkedValues:
    def test_maximally_mixed_qubit(self):
        assert en.weighted_entropy(np.eye(2) / 2, np.eye(2)).value == pytest.approx(math.log(2), abs=1e-12)

    def test_weighted_diag(self):
        assert en.weighted_entropy(d(.5, .5), d(1, 3)).value == pytest.approx(2 * math.log(2), abs=1e-12)

    def test_quarter(self):
        assert en.weighted_entropy(d(.25, .75), np.eye(2)).value == pytest.approx(0.5623351446, abs=1e-9)

    def test_pure_state_zero(self, gen):
        rho = st.sample_density(3, 1, gen)
        assert abs(en.weighted_entropy(rho, st.sample_weight(3, gen)).value) < 1e-12

    @pytest.mark.parametrize("mode", list(TraceMode))
    def test_kl_commuting(self, mode):
        v = en.weighted_relative_entropy(d(.5, .5), d(.25, .75), np.eye(2), mode)
        assert v.value == pytest.approx(0.5 * math.log(2) + 0.5 * math.log(2 / 3), abs=1e-12)

    def test_weighted_shannon(self):
        assert en.weighted_shannon([.5, .5], [2, 4]) == pytest.approx(3 * math.log(2), abs=1e-12)
        assert en.weighted_shannon([1.0, 0.0], [1, 1]) == 0.0

    def test_shannon_shape(self):
        with pytest.raises(la.ShapeError):
            en.weighted_shannon([.5, .5], [1])


class TestEntropyProperties:
    def test_von_neumann_with_identity(self, gen):
        for k in range(2, 7):
            rho = st.sample_density(k, rng=gen)
            lam = np.linalg.eigvalsh(rho)
            assert en.weighted_entropy(rho, np.eye(k)).value == pytest.approx(-np.sum(lam * np.log(lam)), abs=1e-10)

    def test_linear_in_weight(self, gen):
        rho = st.sample_density(4, rng=gen)
        p1, p2 = st.sample_weight(4, gen), st.sample_weight(4, gen)
        s = lambda p: en.weighted_entropy(rho, p).value  # noqa: E731
        assert s(2 * p1 + 3 * p2) == pytest.approx(2 * s(p1) + 3 * s(p2), rel=1e-12)

    def test_depends_only_on_eigenbasis_diagonal(self, gen):
        rho, phi = st.sample_density(4, rng=gen), st.sample_weight(4, gen)
        assert en.weighted_entropy(rho, phi).value == pytest.approx(
            en.weighted_entropy(rho, st.conjugate_weight(rho, phi)).value, abs=1e-12)

    def test_unitary_covariance(self, gen):
        rho, phi = st.sample_density(3, rng=gen), st.sample_weight(3, gen)
        u = st.sample_unitary(3, gen)
        a = en.weighted_entropy(rho, phi).value
        b = en.weighted_entropy(u @ rho @ u.conj().T, u @ phi @ u.conj().T).value
        assert a == pytest.approx(b, abs=1e-12)

    def test_imag_residue_tiny(self, gen):
        assert en.weighted_entropy(st.sample_density(5, rng=gen), st.sample_weight(5, gen)).imag_residue < 1e-13


class TestRelativeEntropy:
    def test_literal_self_zero(self, gen):
        rho, phi = st.sample_density(4, rng=gen), st.sample_weight(4, gen)
        assert abs(en.weighted_relative_entropy(rho, rho, phi, "literal").value) < 1e-12

    def test_sandwiched_self_is_jensen_gap(self, gen):
        # sandwiched D(rho||rho) is not zero for a non-commuting weight; it is tr(phi rho ln rho) - tr(L rho L ln rho)
        rho, phi = st.sample_density(3, rng=gen), st.sample_weight(3, gen)
        v = en.weighted_relative_entropy(rho, rho, phi, "sandwiched").value
        l = la.sqrt_psd(phi)
        ref = (la.hermitian_trace(phi, la.xlogx_matrix(rho))
               - la.hermitian_trace(l @ rho @ l, la.log_on_support(rho)))
        assert v == pytest.approx(ref, abs=1e-12)

    def test_sandwiched_self_zero_when_commuting(self, gen):
        rho = d(.2, .3, .5)
        assert abs(en.weighted_relative_entropy(rho, rho, d(1, 2, 3), "sandwiched").value) < 1e-13

    def test_support_violation_is_infinite(self):
        v = en.weighted_relative_entropy(d(.5, .5), d(1, 0), np.eye(2))
        assert v.infinite and math.isinf(float(v))

    def test_sandwiched_is_real(self, gen):
        rho, sigma, phi = st.sample_density(3, rng=gen), st.sample_density(3, rng=gen), st.sample_weight(3, gen)
        assert en.weighted_relative_entropy(rho, sigma, phi, "sandwiched").imag_residue < 1e-13

    def test_literal_reports_residue(self, gen):
        rho, sigma, phi = st.sample_density(3, rng=gen), st.sample_density(3, rng=gen), st.sample_weight(3, gen)
        v = en.weighted_relative_entropy(rho, sigma, phi, "literal")
        t = np.trace(phi @ rho @ la.matrix_func(sigma, "log"))
        assert v.imag_residue == pytest.approx(abs(t.imag), abs=1e-12)

    def test_mode_parsing(self):
        assert en.trace_mode("literal") is TraceMode.LITERAL
        with pytest.raises(ValueError):
            en.trace_mode("bogus")


class TestReduced:
    def test_product_marginal(self, gen):
        a, b = st.sample_density(2, rng=gen), st.sample_density(3, rng=gen)
        pa, pb = st.sample_weight(2, gen), st.sample_weight(3, gen)
        rho, phi = la.tensor(a, b), la.tensor(pa, pb)
        r = en.reduced_weighted_entropy(rho, phi, [2, 3], [0])
        # psi_A rho_A = tr_B(phi rho) = pa a tr(pb b)
        expected = np.trace(pb @ b).real * en.weighted_entropy(a, pa).value
        assert r.value == pytest.approx(expected, abs=1e-12)

    def test_identity_weight_is_von_neumann(self, gen):
        rho = st.sample_density(6, rng=gen)
        r = en.reduced_weighted_entropy(rho, np.eye(6), [2, 3], [1])
        assert r.value == pytest.approx(en.von_neumann_entropy(la.partial_trace(rho, [2, 3], [1])), abs=1e-12)

    def test_shape_mismatch(self, gen):
        with pytest.raises(la.ShapeError):
            en.reduced_weighted_entropy(np.eye(4) / 4, None, [2, 2], [0], weighted=np.eye(2))


@settings(max_examples=50, deadline=None)
@given(seed=hst.integers(0, 2**32 - 1), k=hst.integers(2, 6))
def test_weighted_entropy_nonnegative(seed, k):
    gen = RngStream(seed).generator()
    assert en.weighted_entropy(st.sample_density(k, rng=gen), st.sample_weight(k, gen)).value >= -1e-12


@settings(max_examples=50, deadline=None)
@given(seed=hst.integers(0, 2**32 - 1), k=hst.integers(2, 5))
def test_classical_reduces_to_weighted_shannon(seed, k):
    gen = RngStream(seed).generator()
    p = st.sample_probability(k, gen)
    w = gen.uniform(0.1, 3.0, k)
    assert en.weighted_entropy(np.diag(p), np.diag(w)).value == pytest.approx(en.weighted_shannon(p, w), abs=1e-12)
