"""Dense complex-matrix kernel.

Hermitian spectral calculus, tensor and partial-trace algebra, and the two
operator integrals that appear in the triple-matrix trace inequality,

.. math::

    T_A(B) = \\int_0^\\infty (A + \\omega)^{-1} B (A + \\omega)^{-1} d\\omega,
    \\qquad
    K_W(Z) = \\int_0^1 e^{sZ} W e^{(1-s)Z} ds,

both evaluated exactly through divided-difference kernels in an eigenbasis.
Quadrature and truncated-series versions are kept as independent oracles.

All functions take and return plain :class:`numpy.ndarray` objects and never
mutate their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.integrate
import scipy.linalg

HERM_TOL = 1e-12
EIG_TOL = 1e-10
SUPPORT_TOL = 1e-12
DEGENERACY_TOL = 1e-8


class LinalgError(ValueError):
    """Base class for kernel input errors."""


class NotHermitianError(LinalgError):
    def __init__(self, asymmetry: float):
        super().__init__(f"matrix is not Hermitian: max |A - A^H| = {asymmetry:.3e}")
        self.asymmetry = asymmetry


class NotPSDError(LinalgError):
    def __init__(self, eigenvalue: float):
        super().__init__(f"matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")
        self.eigenvalue = eigenvalue


class DomainError(LinalgError):
    """A scalar function is undefined somewhere on the spectrum."""


class ShapeError(LinalgError):
    pass


class OracleError(ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class SupportInfo:
    rank: int
    projector: np.ndarray
    pseudo_inverse: np.ndarray
    threshold: float


@dataclass(frozen=True)
class ScalarFunction:
    """A real scalar function with its derivative, for spectral calculus."""

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    domain_min: float = -math.inf
    open_min: bool = False
    convex: bool = True


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def _xlogx_prime(x):
    return np.log(x) + 1.0


SCALAR_FUNCTIONS = {
    "xlogx": ScalarFunction("xlogx", _xlogx, _xlogx_prime, 0.0, False, True),
    "exp": ScalarFunction("exp", np.exp, np.exp),
    "log": ScalarFunction("log", np.log, lambda x: 1.0 / x, 0.0, True, False),
    "identity": ScalarFunction("identity", lambda x: np.asarray(x, dtype=float),
                               lambda x: np.ones_like(x, dtype=float)),
}


def scalar_function(f: str | ScalarFunction) -> ScalarFunction:
    if isinstance(f, ScalarFunction):
        return f
    try:
        return SCALAR_FUNCTIONS[f]
    except KeyError:
        raise LinalgError(f"unknown scalar function {f!r}") from None


# --------------------------------------------------------------------------- #
#                              basic predicates                               #
# --------------------------------------------------------------------------- #

def as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LinalgError("matrix has non-finite entries")
    return a


def hermitian_asymmetry(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a, herm_tol: float = HERM_TOL) -> np.ndarray:
    """Validate ``a`` as Hermitian (relative to max |a_ij|) and return it symmetrised."""
    a = as_square(a)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    asym = hermitian_asymmetry(a)
    if asym > herm_tol * scale:
        raise NotHermitianError(asym)
    return (a + a.conj().T) / 2


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """tr(a @ b) without forming the product."""
    return complex(np.einsum("ij,ji->", a, b))


def hermitian_trace(h1: np.ndarray, h2: np.ndarray) -> float:
    """tr(h1 @ h2) for Hermitian arguments, real by construction."""
    return float(np.sum(h1.real * h2.real + h1.imag * h2.imag))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


# --------------------------------------------------------------------------- #
#                              eigen-decomposition                            #
# --------------------------------------------------------------------------- #

def _finish(w: np.ndarray, v: np.ndarray) -> SpectralDecomposition:
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Phase convention: the largest-magnitude component of each column is real
    # and positive. Ties are broken by the lowest row index.
    if v.size:
        idx = np.argmax(np.abs(v) - 1e-12 * np.arange(v.shape[0])[:, None], axis=0)
        pivots = v[idx, np.arange(v.shape[1])]
        v = v * (np.abs(pivots) / pivots)[None, :]
    return SpectralDecomposition(np.ascontiguousarray(w), np.ascontiguousarray(v))


def jacobi_eig(a, tol: float = 1e-14, max_sweeps: int = 100,
               herm_tol: float = HERM_TOL) -> SpectralDecomposition:
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each step applies a unitary 2x2 rotation that annihilates one
    off-diagonal pair; sweeps visit pairs in row-major order. Iteration
    stops once the off-diagonal Frobenius mass is below ``tol * ||a||_F``.
    """
    a = check_hermitian(a, herm_tol).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if n == 0 or norm == 0:
        return _finish(np.zeros(n), v)
    target = tol * norm
    for _ in range(max_sweeps):
        if np.linalg.norm(a - np.diag(np.diag(a))) < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                mag = abs(g)
                if mag < 1e-300:
                    continue
                phase = g / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ j
                a[cols, :] = j.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                v[:, cols] = v[:, cols] @ j
    else:
        raise LinalgError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return _finish(np.diag(a).real.copy(), v)


def hermitian_eig(a, herm_tol: float = HERM_TOL, method: str = "lapack") -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending.

    ``method="lapack"`` (default) calls ``numpy.linalg.eigh``;
    ``method="jacobi"`` runs :func:`jacobi_eig`. Both normalise the output
    identically (sort order and eigenvector phase), so results are
    deterministic for a fixed input.
    """
    if method == "jacobi":
        return jacobi_eig(a, herm_tol=herm_tol)
    if method != "lapack":
        raise LinalgError(f"unknown eigen method {method!r}")
    a = check_hermitian(a, herm_tol)
    w, v = np.linalg.eigh(a)
    return _finish(w, v)


# --------------------------------------------------------------------------- #
#                               matrix functions                              #
# --------------------------------------------------------------------------- #

def _from_spectrum(dec: SpectralDecomposition, values: np.ndarray) -> np.ndarray:
    v = dec.eigenvectors
    out = (v * values) @ v.conj().T
    return (out + out.conj().T) / 2


def matrix_func(a, f: str | ScalarFunction, herm_tol: float = HERM_TOL) -> np.ndarray:
    """f(a) = V diag(f(lambda)) V^H."""
    f = scalar_function(f)
    dec = hermitian_eig(a, herm_tol)
    lam = dec.eigenvalues
    bad = lam < f.domain_min if not f.open_min else lam <= f.domain_min
    if np.any(bad):
        raise DomainError(f"{f.name} undefined at eigenvalue {lam[bad][0]:.6g}")
    return _from_spectrum(dec, f.value(lam))


def _psd_spectrum(a, support_tol: float) -> tuple[SpectralDecomposition, float]:
    dec = hermitian_eig(a)
    lam = dec.eigenvalues
    scale = max(float(np.max(np.abs(lam))) if lam.size else 0.0, 0.0)
    if lam.size and lam[-1] < -support_tol * scale:
        raise NotPSDError(float(lam[-1]))
    return dec, support_tol * scale


def log_on_support(a, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Natural log on the support of a PSD matrix, zero on its null space."""
    dec, thr = _psd_spectrum(a, support_tol)
    lam = dec.eigenvalues
    on = lam > thr
    vals = np.zeros_like(lam)
    vals[on] = np.log(lam[on])
    return _from_spectrum(dec, vals)


def xlogx_matrix(a, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """a log a with the 0 log 0 = 0 convention."""
    dec, thr = _psd_spectrum(a, support_tol)
    lam = dec.eigenvalues
    on = lam > thr
    vals = np.zeros_like(lam)
    vals[on] = lam[on] * np.log(lam[on])
    return _from_spectrum(dec, vals)


def sqrt_psd(w, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Principal (PSD) square root."""
    dec, _ = _psd_spectrum(w, support_tol)
    return _from_spectrum(dec, np.sqrt(np.clip(dec.eigenvalues, 0.0, None)))


def support_info(a, support_tol: float = SUPPORT_TOL) -> SupportInfo:
    dec, thr = _psd_spectrum(a, support_tol)
    lam = dec.eigenvalues
    on = lam > thr if lam.size and lam[0] > 0 else np.zeros(lam.shape, dtype=bool)
    proj = _from_spectrum(dec, on.astype(float))
    inv = np.zeros_like(lam)
    inv[on] = 1.0 / lam[on]
    return SupportInfo(int(on.sum()), proj, _from_spectrum(dec, inv), thr)


# --------------------------------------------------------------------------- #
#                         tensor and partial-trace algebra                    #
# --------------------------------------------------------------------------- #

def tensor(*factors) -> np.ndarray:
    """Kronecker product; the leftmost factor is the slowest index."""
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or math.prod(dims) != m.shape[0] or m.shape[0] != m.shape[1]:
        raise ShapeError(f"dims {dims} inconsistent with matrix shape {m.shape}")
    return dims


def partial_trace(m, dims: Sequence[int], keep: Sequence[int] | int) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    Kept factors stay in their original order regardless of the order given
    in ``keep``.
    """
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    keep = sorted({int(keep)} if np.isscalar(keep) else {int(k) for k in keep})
    n = len(dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ShapeError(f"keep={keep} invalid for {n} factors")
    t = m.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n:2 * n]) if 2 * n <= 26 else None
    if col is None:
        raise ShapeError("too many factors")
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out_idx = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    out = np.einsum("".join(row) + "".join(col) + "->" + out_idx, t)
    dk = math.prod(dims[i] for i in keep)
    return out.reshape(dk, dk)


def permute_factors(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator: new factor i is old factor order[i]."""
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    t = m.reshape(dims + dims).transpose(list(order) + [n + o for o in order])
    d = m.shape[0]
    return t.reshape(d, d)


# --------------------------------------------------------------------------- #
#                         divided-difference operator integrals               #
# --------------------------------------------------------------------------- #

def _degenerate(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    return np.abs(a1 - a2) < DEGENERACY_TOL * np.maximum(1.0, np.abs(a1))


def log_divided_difference(a: np.ndarray) -> np.ndarray:
    """k(a_i, a_j) = (ln a_i - ln a_j)/(a_i - a_j), 1/a on the diagonal limit."""
    a1, a2 = np.meshgrid(a, a, indexing="ij")
    deg = _degenerate(a1, a2)
    diff = np.where(deg, 1.0, a1 - a2)
    k = (np.log(a1) - np.log(a2)) / diff
    mid = (a1 + a2) / 2
    return np.where(deg, 1.0 / mid, k)


def exp_divided_difference(z: np.ndarray) -> np.ndarray:
    """kappa(z_i, z_j) = (e^z_i - e^z_j)/(z_i - z_j), e^z on the diagonal limit."""
    z1, z2 = np.meshgrid(z, z, indexing="ij")
    deg = _degenerate(z1, z2)
    diff = np.where(deg, 1.0, z1 - z2)
    k = np.exp(z2) * np.expm1(z1 - z2) / diff
    return np.where(deg, np.exp((z1 + z2) / 2), k)


def lieb_T(a, b, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """T_a(b) = int_0^inf (a + w)^-1 b (a + w)^-1 dw for positive definite a."""
    dec = hermitian_eig(a)
    lam = dec.eigenvalues
    if lam[-1] <= support_tol * max(lam[0], 1e-300):
        raise DomainError(f"lieb_T needs a positive definite argument, min eigenvalue {lam[-1]:.3e}")
    v = dec.eigenvectors
    bt = v.conj().T @ np.asarray(b, dtype=complex) @ v
    out = v @ (bt * log_divided_difference(lam)) @ v.conj().T
    return (out + out.conj().T) / 2


def k_w(z, w) -> np.ndarray:
    """K_W(Z) = sum_n 1/(n+1)! sum_l Z^(n-l) W Z^l = int_0^1 e^(sZ) W e^((1-s)Z) ds."""
    dec = hermitian_eig(z)
    v = dec.eigenvectors
    wt = v.conj().T @ np.asarray(w, dtype=complex) @ v
    out = v @ (wt * exp_divided_difference(dec.eigenvalues)) @ v.conj().T
    return (out + out.conj().T) / 2


# --------------------------------------------------------------------------- #
#                                   oracles                                   #
# --------------------------------------------------------------------------- #

def k_w_series(z, w, n_max: int = 30) -> np.ndarray:
    """Truncated power series for K_W(Z), terms n = 0..n_max."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    d = z.shape[0]
    powers = [np.eye(d, dtype=complex)]
    for _ in range(n_max):
        powers.append(powers[-1] @ z)
    out = np.zeros((d, d), dtype=complex)
    for n in range(n_max + 1):
        inner = sum(powers[n - l] @ w @ powers[l] for l in range(n + 1))
        out += inner / math.factorial(n + 1)
    return out


def quad_oracle(kind: str, a, b, epsabs: float = 1e-13, epsrel: float = 1e-11,
                limit: int = 2000) -> np.ndarray:
    """Adaptive quadrature of the defining integral of ``lieb_T`` or ``k_w``.

    For ``lieb_T`` the arguments are ``(A, B)`` and the half line is mapped
    to [0, 1) by w = t/(1-t). For ``k_w`` they are ``(Z, W)``. Uses dense
    inverses and ``scipy.linalg.expm`` only, never an eigenbasis.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = a.shape[0]
    eye = np.eye(d)
    if kind == "lieb_T":
        def integrand(t):
            if t >= 1.0:
                return b.copy()
            r = np.linalg.inv((1.0 - t) * a + t * eye)
            # (a + w)^-1 = (1 - t) r, and dw = dt / (1 - t)^2
            return r @ b @ r
    elif kind == "k_w":
        def integrand(s):
            return scipy.linalg.expm(s * a) @ b @ scipy.linalg.expm((1.0 - s) * a)
    else:
        raise LinalgError(f"unknown oracle kind {kind!r}")
    res, err, info = scipy.integrate.quad_vec(integrand, 0.0, 1.0, epsabs=epsabs,
                                              epsrel=epsrel, limit=limit, full_output=True)
    if not info.success:
        raise OracleError(f"{kind} quadrature did not converge: "
                          f"err={err:.3e} after {info.intervals.shape[0]} intervals")
    return (res + res.conj().T) / 2
