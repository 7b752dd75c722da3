"""Density matrices, weights, purifications and random ensembles.

States and weights are plain complex ``ndarray`` objects; the ``check_*``
helpers validate them. Randomness comes from :class:`RngStream`, an immutable
``(seed, stream_index)`` key for a counter-based Philox generator, so
instance ``i`` of a campaign can be drawn by any worker in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .linalg import (
    SUPPORT_TOL,
    LinalgError,
    NotPSDError,
    ShapeError,
    check_hermitian,
    hermitian_eig,
    partial_trace,
    tensor,
)

PSD_TOL = 1e-10
TRACE_TOL = 1e-10
UNITARY_TOL = 1e-10
SPEC_TOL = 1e-10
DEGENERACY_TOL = 1e-8

_MASK64 = (1 << 64) - 1


class StateError(ValueError):
    pass


class PairingError(StateError):
    """Eigenvalue pairing between two states is ambiguous or impossible."""


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = (self.seed & _MASK64) | ((self.stream_index & _MASK64) << 64)
        return np.random.Generator(np.random.Philox(key=key))


RngLike = Union[RngStream, np.random.Generator]


def _gen(rng: RngLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


# --------------------------------------------------------------------------- #
#                                 validation                                  #
# --------------------------------------------------------------------------- #

def check_density(rho, psd_tol: float = PSD_TOL, trace_tol: float = TRACE_TOL) -> np.ndarray:
    rho = check_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise StateError(f"density matrix trace is {tr!r}, expected 1")
    lmin = np.linalg.eigvalsh(rho)[0]
    if lmin < -psd_tol:
        raise NotPSDError(float(lmin))
    return rho


def check_weight(phi, definite: bool = False, psd_tol: float = PSD_TOL,
                 support_tol: float = SUPPORT_TOL) -> np.ndarray:
    phi = check_hermitian(phi)
    lmin = np.linalg.eigvalsh(phi)[0]
    if lmin < -psd_tol:
        raise NotPSDError(float(lmin))
    if definite and lmin <= support_tol:
        raise StateError(f"weight is not positive definite: min eigenvalue {lmin:.3e}")
    return phi


def is_positive_definite(phi, support_tol: float = SUPPORT_TOL) -> bool:
    lam = np.linalg.eigvalsh(phi)
    return bool(lam[0] > support_tol * max(lam[-1], 1.0))


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ShapeError(f"basis must be square, got {u.shape}")
    err = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
    if err > tol:
        raise StateError(f"basis is not unitary: ||U^H U - 1||_F = {err:.3e}")
    return u


# --------------------------------------------------------------------------- #
#                                  sampling                                   #
# --------------------------------------------------------------------------- #

def ginibre(rows: int, cols: int, rng: RngLike) -> np.ndarray:
    """Matrix of independent standard complex Gaussians (E|g|^2 = 1)."""
    g = _gen(rng)
    return (g.standard_normal((rows, cols)) + 1j * g.standard_normal((rows, cols))) / math.sqrt(2)


def sample_density(d: int, rank: int | None = None, rng: RngLike = None) -> np.ndarray:
    """Ginibre-induced random state GG^H / tr(GG^H) with G of shape (d, rank)."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise StateError(f"rank must be in [1, {d}], got {rank}")
    g = ginibre(d, rank, rng)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def sample_pure(d: int, rng: RngLike) -> np.ndarray:
    v = ginibre(d, 1, rng)[:, 0]
    return v / np.linalg.norm(v)


def sample_weight(d: int, rng: RngLike, definite: bool = True) -> np.ndarray:
    """GG^H, shifted by 0.1 on the diagonal when ``definite``."""
    g = ginibre(d, d, rng)
    w = g @ g.conj().T
    w = (w + w.conj().T) / 2
    if definite:
        w = w + 0.1 * np.eye(d)
    return w


def sample_hermitian(d: int, rng: RngLike) -> np.ndarray:
    g = ginibre(d, d, rng)
    return (g + g.conj().T) / 2


def sample_unitary(d: int, rng: RngLike) -> np.ndarray:
    """Haar unitary: QR of a Ginibre matrix with the R-diagonal phases removed."""
    q, r = np.linalg.qr(ginibre(d, d, rng))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def sample_probability(r: int, rng: RngLike) -> np.ndarray:
    """Uniform point on the simplex via normalised exponentials."""
    e = _gen(rng).standard_exponential(r)
    return e / e.sum()


def sample_classical_instance(dims: Sequence[int], rng: RngLike):
    """Jointly diagonal state and factor weights on a 2- or 3-factor system.

    Returns ``(rho, [phi_1, ..., phi_n])``. Everything is exactly diagonal in
    the computational product basis, so every commutator between the state,
    its marginals and the weights is identically zero.
    """
    dims = [int(d) for d in dims]
    if len(dims) not in (2, 3):
        raise ShapeError(f"classical instances need 2 or 3 factors, got {dims}")
    g = _gen(rng)
    p = sample_probability(math.prod(dims), g)
    rho = np.diag(p).astype(complex)
    weights = [np.diag(np.abs(ginibre(d, 1, g)[:, 0]) ** 2 + 0.1).astype(complex) for d in dims]
    return rho, weights


# --------------------------------------------------------------------------- #
#                             derived constructions                           #
# --------------------------------------------------------------------------- #

def diagonal_part(rho, basis) -> np.ndarray:
    """rho^d with <f_j|rho^d|f_k> = delta_jk <f_j|rho|f_j>, where f_j are the columns of ``basis``."""
    u = check_unitary(basis)
    rho = np.asarray(rho, dtype=complex)
    p = np.einsum("ji,jk,ki->i", u.conj(), rho, u).real
    return (u * p) @ u.conj().T


def purify(rho_a) -> np.ndarray:
    """|chi> = sum_i sqrt(lambda_i) |e_i> (x) |i> on A (x) R, with R's computational basis.

    The R index ``i`` follows the descending eigenvalue order, so
    ``tr_A |chi><chi| = diag(lambda)``.
    """
    dec = hermitian_eig(rho_a)
    lam = dec.eigenvalues
    # sqrt would turn 1e-17 eigenvalue noise into 3e-9 amplitudes
    amp = np.where(lam > SPEC_TOL, np.sqrt(np.clip(lam, 0.0, None)), 0.0)
    return (dec.eigenvectors * amp[None, :]).reshape(-1)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def schmidt(psi, dims: Sequence[int]):
    """Schmidt decomposition psi = sum_i c_i |u_i> (x) |v_i>.

    Returns ``(coefficients, left, right)`` with coefficients descending and
    the vectors as columns of ``left`` and ``right``.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if len(dims) != 2 or dims[0] * dims[1] != psi.size:
        raise ShapeError(f"dims {list(dims)} inconsistent with vector of length {psi.size}")
    u, s, vh = np.linalg.svd(psi.reshape(dims[0], dims[1]), full_matrices=False)
    return s, u, vh.T


def conjugate_weight(rho, phi) -> np.ndarray:
    """phi' diagonal in rho's eigenbasis with <e_i|phi'|e_i> = <e_i|phi|e_i>."""
    dec = hermitian_eig(rho)
    v = dec.eigenvectors
    diag = np.einsum("ji,jk,ki->i", v.conj(), np.asarray(phi, dtype=complex), v).real
    out = (v * diag) @ v.conj().T
    return (out + out.conj().T) / 2


def support_rank(lam: np.ndarray, tol: float = SPEC_TOL) -> int:
    return int(np.sum(lam > tol))


def check_nondegenerate(lam: np.ndarray, rank: int, degeneracy_tol: float = DEGENERACY_TOL) -> None:
    top = lam[:rank]
    if rank > 1:
        gaps = top[:-1] - top[1:]
        if np.min(gaps) < degeneracy_tol:
            i = int(np.argmin(gaps))
            raise PairingError(f"degenerate spectrum: eigenvalues {top[i]:.12g} and "
                               f"{top[i + 1]:.12g} are within {degeneracy_tol:g}")


def cross_conjugate_weight(rho_src, phi_src, rho_dst, spec_tol: float = SPEC_TOL,
                           degeneracy_tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Weight on the destination system conjugated to ``phi_src`` across two states.

    The result is diagonal in ``rho_dst``'s eigenbasis; its i-th diagonal
    entry (descending eigenvalue order) is ``<e_i^src|phi_src|e_i^src>`` for
    i below the source rank and zero beyond it.
    """
    src = hermitian_eig(rho_src)
    dst = hermitian_eig(rho_dst)
    r = support_rank(src.eigenvalues, spec_tol)
    if dst.eigenvalues.size < r:
        raise PairingError(f"destination dimension {dst.eigenvalues.size} below source rank {r}")
    mismatch = np.max(np.abs(src.eigenvalues[:r] - dst.eigenvalues[:r])) if r else 0.0
    rest = np.max(np.abs(dst.eigenvalues[r:])) if dst.eigenvalues.size > r else 0.0
    if mismatch > spec_tol or rest > spec_tol:
        raise PairingError(f"spectra differ: max mismatch {max(mismatch, rest):.3e}")
    check_nondegenerate(src.eigenvalues, r, degeneracy_tol)
    v = src.eigenvectors[:, :r]
    entries = np.zeros(dst.eigenvalues.size)
    entries[:r] = np.einsum("ji,jk,ki->i", v.conj(), np.asarray(phi_src, dtype=complex), v).real
    w = dst.eigenvectors
    out = (w * entries) @ w.conj().T
    return (out + out.conj().T) / 2


def block_joint_state(states: Sequence[np.ndarray], b: Sequence[float]) -> np.ndarray:
    """Joint state on A (x) R with <v (x) e_l|rho|v' (x) e_l'> = b_l <v|rho_l|v'> delta_ll'."""
    r = len(states)
    if r != len(b):
        raise ShapeError(f"{r} states but {len(b)} probabilities")
    out = 0
    for l, (s, bl) in enumerate(zip(states, b)):
        e = np.zeros((r, r))
        e[l, l] = 1.0
        out = out + bl * tensor(s, e)
    return out


def marginals(rho, dims: Sequence[int]) -> list[np.ndarray]:
    return [partial_trace(rho, dims, [k]) for k in range(len(dims))]


__all__ = [
    "RngStream", "StateError", "PairingError", "LinalgError",
    "check_density", "check_weight", "check_unitary", "is_positive_definite",
    "ginibre", "sample_density", "sample_pure", "sample_weight", "sample_hermitian",
    "sample_unitary", "sample_probability", "sample_classical_instance",
    "diagonal_part", "purify", "projector", "schmidt", "conjugate_weight",
    "cross_conjugate_weight", "block_joint_state", "marginals",
]
