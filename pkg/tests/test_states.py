import numpy as np
import pytest

from wqe import linalg as la
from wqe import states as st
from wqe.states import RngStream


class TestRng:
    def test_same_key_same_stream(self):
        a = RngStream(7, 3).generator().standard_normal(5)
        b = RngStream(7, 3).generator().standard_normal(5)
        assert np.array_equal(a, b)

    def test_indices_independent(self):
        a = RngStream(7, 3).generator().standard_normal(5)
        b = RngStream(7, 4).generator().standard_normal(5)
        c = RngStream(8, 3).generator().standard_normal(5)
        assert not np.array_equal(a, b) and not np.array_equal(a, c)

    def test_large_seed(self):
        RngStream(2**64 - 1, 2**40).generator().random()


class TestSamplers:
    @pytest.mark.parametrize("d,rank", [(2, None), (5, None), (4, 1), (6, 3)])
    def test_density(self, gen, d, rank):
        rho = st.sample_density(d, rank, gen)
        st.check_density(rho)
        lam = np.linalg.eigvalsh(rho)
        assert np.sum(lam > 1e-12) == (rank or d)

    def test_bad_rank(self, gen):
        with pytest.raises(st.StateError):
            st.sample_density(3, 4, gen)

    def test_weight_definite(self, gen):
        w = st.sample_weight(4, gen)
        st.check_weight(w, definite=True)
        assert np.linalg.eigvalsh(w)[0] >= 0.1 - 1e-12

    def test_unitary(self, gen):
        st.check_unitary(st.sample_unitary(5, gen))

    def test_probability(self, gen):
        p = st.sample_probability(6, gen)
        assert p.min() > 0 and p.sum() == pytest.approx(1.0)

    def test_classical_instance(self, gen):
        rho, ws = st.sample_classical_instance([2, 3, 2], gen)
        assert rho.shape == (12, 12)
        assert np.count_nonzero(rho - np.diag(np.diag(rho))) == 0
        assert [w.shape[0] for w in ws] == [2, 3, 2]


class TestValidators:
    def test_trace(self):
        with pytest.raises(st.StateError):
            st.check_density(np.eye(2))

    def test_negative(self):
        with pytest.raises(la.NotPSDError):
            st.check_density(np.diag([1.5, -0.5]))

    def test_weight_semidefinite(self):
        st.check_weight(np.diag([1.0, 0.0]))
        with pytest.raises(st.StateError):
            st.check_weight(np.diag([1.0, 0.0]), definite=True)

    def test_not_unitary(self):
        with pytest.raises(st.StateError):
            st.check_unitary(np.diag([1.0, 2.0]))


class TestConstructions:
    def test_diagonal_part(self, gen):
        rho = st.sample_density(4, rng=gen)
        u = st.sample_unitary(4, gen)
        rd = st.diagonal_part(rho, u)
        inner = u.conj().T @ rd @ u
        np.testing.assert_allclose(inner, np.diag(np.diag(u.conj().T @ rho @ u)), atol=1e-14)

    def test_purify_marginals(self, gen):
        rho = st.sample_density(3, rng=gen)
        psi = st.purify(rho)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        chi = st.projector(psi)
        np.testing.assert_allclose(la.partial_trace(chi, [3, 3], [0]), rho, atol=1e-14)
        lam = la.hermitian_eig(rho).eigenvalues
        np.testing.assert_allclose(la.partial_trace(chi, [3, 3], [1]), np.diag(lam), atol=1e-14)

    def test_schmidt(self, gen):
        psi = st.sample_pure(6, gen)
        s, u, v = st.schmidt(psi, [2, 3])
        rebuilt = sum(s[i] * np.kron(u[:, i], v[:, i]) for i in range(len(s)))
        np.testing.assert_allclose(rebuilt, psi, atol=1e-14)
        assert np.sum(s**2) == pytest.approx(1.0)

    def test_schmidt_bad_dims(self, gen):
        with pytest.raises(la.ShapeError):
            st.schmidt(st.sample_pure(6, gen), [2, 2])

    def test_conjugate_weight_diagonal_entries(self, gen):
        rho, phi = st.sample_density(4, rng=gen), st.sample_weight(4, gen)
        v = la.hermitian_eig(rho).eigenvectors
        pc = st.conjugate_weight(rho, phi)
        np.testing.assert_allclose(np.diag(v.conj().T @ pc @ v).real,
                                   np.diag(v.conj().T @ phi @ v).real, atol=1e-12)
        assert la.commutator_norm(pc, rho) < 1e-12

    def test_cross_conjugate_pads_zero(self, gen):
        rho_a = st.sample_density(2, rng=gen)
        lam = la.hermitian_eig(rho_a).eigenvalues
        rho_r = np.diag(np.r_[lam, 0.0]).astype(complex)
        phi = st.sample_weight(2, gen)
        out = st.cross_conjugate_weight(rho_a, phi, rho_r)
        assert out.shape == (3, 3) and abs(out[2, 2]) < 1e-14

    def test_cross_conjugate_mismatch(self, gen):
        with pytest.raises(st.PairingError):
            st.cross_conjugate_weight(np.diag([0.7, 0.3]), np.eye(2), np.diag([0.6, 0.4]))

    def test_cross_conjugate_degenerate(self):
        with pytest.raises(st.PairingError):
            st.cross_conjugate_weight(np.eye(2) / 2, np.diag([1.0, 2.0]), np.eye(2) / 2)

    def test_block_joint_state(self, gen):
        states = [st.sample_density(2, rng=gen) for _ in range(3)]
        b = st.sample_probability(3, gen)
        j = st.block_joint_state(states, b)
        st.check_density(j)
        np.testing.assert_allclose(la.partial_trace(j, [2, 3], [0]),
                                   sum(bl * s for bl, s in zip(b, states)), atol=1e-14)
        np.testing.assert_allclose(la.partial_trace(j, [2, 3], [1]), np.diag(b), atol=1e-14)

    def test_block_length_mismatch(self, gen):
        with pytest.raises(la.ShapeError):
            st.block_joint_state([np.eye(2) / 2], [0.5, 0.5])
