"""Weighted entropy functionals.

.. math::

    S_\\phi(\\rho) = -\\mathrm{tr}(\\phi \\rho \\ln \\rho), \\qquad
    D_\\phi(\\rho\\|\\sigma) = \\mathrm{tr}(\\phi\\rho\\ln\\rho) - \\mathrm{tr}(\\phi\\rho\\ln\\sigma).

With three non-commuting Hermitian factors ``tr(phi rho ln sigma)`` is in
general complex. Every functional therefore returns an :class:`EntropyValue`
carrying the real part as ``value`` and ``|Im|`` as ``imag_residue``. The
``sandwiched`` trace mode replaces ``phi rho`` by ``L rho L`` with
``L = sqrt(phi)`` wherever the literal form would multiply three
non-commuting factors; it is real by construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    SUPPORT_TOL,
    ShapeError,
    hermitian_eig,
    hermitian_trace,
    log_on_support,
    partial_trace,
    sqrt_psd,
    support_info,
    trace_product,
    xlogx_matrix,
)

SUPPORT_VIOLATION_TOL = 1e-10


class TraceMode(str, enum.Enum):
    LITERAL = "literal"
    SANDWICHED = "sandwiched"


def trace_mode(mode) -> TraceMode:
    return mode if isinstance(mode, TraceMode) else TraceMode(mode)


@dataclass(frozen=True)
class EntropyValue:
    value: float
    imag_residue: float = 0.0

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return self.value


def weighted_entropy(rho, phi, support_tol: float = SUPPORT_TOL) -> EntropyValue:
    """S_phi(rho) = -sum_i <e_i|phi|e_i> lambda_i ln lambda_i over the support of rho."""
    rho = np.asarray(rho, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    m = xlogx_matrix(rho, support_tol)
    t = trace_product(phi, m)
    return EntropyValue(-t.real, abs(t.imag))


def von_neumann_entropy(rho, support_tol: float = SUPPORT_TOL) -> float:
    lam = hermitian_eig(rho).eigenvalues
    lam = lam[lam > support_tol * max(lam[0], 0.0)]
    return float(-np.sum(lam * np.log(lam)))


def _sandwich(phi, rho) -> np.ndarray:
    l = sqrt_psd(phi)
    out = l @ rho @ l
    return (out + out.conj().T) / 2


def weighted_relative_entropy(rho, sigma, phi, mode=TraceMode.LITERAL,
                              support_tol: float = SUPPORT_TOL) -> EntropyValue:
    """D_phi(rho || sigma); ``inf`` when supp(rho) is not inside supp(sigma)."""
    mode = trace_mode(mode)
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    info = support_info(sigma, support_tol)
    outside = np.eye(rho.shape[0]) - info.projector
    if hermitian_trace(outside, rho) > SUPPORT_VIOLATION_TOL:
        return EntropyValue(math.inf, 0.0)
    ent = weighted_entropy(rho, phi, support_tol)
    first = EntropyValue(-ent.value, ent.imag_residue)
    log_sigma = log_on_support(sigma, support_tol)
    if mode is TraceMode.LITERAL:
        t = trace_product(phi @ rho, log_sigma)
        return EntropyValue(first.value - t.real, first.imag_residue + abs(t.imag))
    second = hermitian_trace(_sandwich(phi, rho), log_sigma)
    return EntropyValue(first.value - second, first.imag_residue)


def weighted_operator(rho, phi, mode=TraceMode.LITERAL) -> np.ndarray:
    """phi rho (literal) or L rho L (sandwiched): the operator reduced by partial traces."""
    mode = trace_mode(mode)
    rho = np.asarray(rho, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    if mode is TraceMode.LITERAL:
        return phi @ rho
    return _sandwich(phi, rho)


def reduced_weighted_entropy(rho, phi, dims: Sequence[int], keep, mode=TraceMode.LITERAL,
                             support_tol: float = SUPPORT_TOL, weighted=None) -> EntropyValue:
    """S_psi(rho_keep) with psi rho_keep = tr_rest(phi rho), without forming psi.

    Evaluates ``-tr(tr_rest(phi rho) ln rho_keep)``. Callers evaluating many
    marginals of the same state can pass the precomputed
    :func:`weighted_operator` as ``weighted``.
    """
    rho = np.asarray(rho, dtype=complex)
    if weighted is None:
        weighted = weighted_operator(rho, phi, mode)
    if np.asarray(weighted).shape != rho.shape:
        raise ShapeError("weighted operator and state differ in shape")
    x = partial_trace(weighted, dims, keep)
    rho_keep = partial_trace(rho, dims, keep)
    t = trace_product(x, log_on_support(rho_keep, support_tol))
    return EntropyValue(-t.real, abs(t.imag))


def weighted_shannon(b, weights) -> float:
    """h_B(b) = -sum_l B_l b_l ln b_l with 0 ln 0 = 0."""
    b = np.asarray(b, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if b.shape != weights.shape:
        raise ShapeError(f"probability vector has length {b.size}, weights {weights.size}")
    pos = b > 0
    return float(-np.sum(weights[pos] * b[pos] * np.log(b[pos])))


def shannon(b) -> float:
    b = np.asarray(b, dtype=float)
    return weighted_shannon(b, np.ones_like(b))
