"""One checker per weighted-entropy inequality.

Every checker evaluates the side conditions, both sides of the inequality and
an oriented ``slack`` (``slack >= -tolerance`` means the inequality holds) and
returns an immutable :class:`Verdict`. When a side condition fails the verdict
is *vacuous*: it keeps all the numerics but never counts as a failure.

``assertions`` holds extra unconditional margins checked alongside the main
slack (identities, reduction cases); ``diagnostics`` holds measurements that
are reported but not asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import states as st
from .entropy import (
    TraceMode,
    reduced_weighted_entropy,
    trace_mode,
    von_neumann_entropy,
    weighted_entropy,
    weighted_operator,
    weighted_relative_entropy,
    weighted_shannon,
)
from .linalg import (
    SUPPORT_TOL,
    DomainError,
    LinalgError,
    commutator_norm,
    hermitian_eig,
    hermitian_trace,
    k_w,
    log_on_support,
    lieb_T,
    matrix_func,
    partial_trace,
    permute_factors,
    scalar_function,
    sqrt_psd,
    support_info,
    tensor,
    trace_product,
)

SLACK_TOL = 1e-9
COMM_TOL = 1e-10
CONJ_TOL = 1e-8
CONDITION_TOL = 1e-12

THEOREMS = (
    "klein", "gibbs", "bounds", "purification", "diagonalisation",
    "subadditivity", "concavity", "araki_lieb", "ssa", "lieb_triple",
)


@dataclass(frozen=True)
class Condition:
    value: float
    ok: bool


@dataclass(frozen=True)
class Verdict:
    theorem: str
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    conditions: dict = field(default_factory=dict)
    imag_residues: dict = field(default_factory=dict)
    assertions: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    mode: str | None = None
    instance_seed: tuple | None = None
    vacuous: bool = False
    passed: bool = True

    @property
    def status(self) -> str:
        if self.vacuous:
            return "vacuous"
        return "pass" if self.passed else "fail"

    @property
    def imag_residue(self) -> float:
        return max(self.imag_residues.values(), default=0.0)

    def with_seed(self, seed: int, index: int) -> "Verdict":
        return replace(self, instance_seed=(int(seed), int(index)))


def make_verdict(theorem, lhs, rhs, slack, tolerance, conditions=None, imag_residues=None,
                 assertions=None, diagnostics=None, mode=None) -> Verdict:
    conditions = dict(conditions or {})
    assertions = dict(assertions or {})
    vacuous = not all(c.ok for c in conditions.values())
    holds = slack >= -tolerance and all(a >= -tolerance for a in assertions.values())
    return Verdict(
        theorem=theorem, lhs=float(lhs), rhs=float(rhs), slack=float(slack),
        tolerance=float(tolerance), conditions=conditions,
        imag_residues={k: float(v) for k, v in (imag_residues or {}).items()},
        assertions={k: float(v) for k, v in assertions.items()},
        diagnostics=dict(diagnostics or {}),
        mode=None if mode is None else trace_mode(mode).value,
        vacuous=vacuous, passed=vacuous or bool(holds),
    )


def _ge(value: float, scale: float = 1.0) -> Condition:
    return Condition(float(value), bool(value >= -CONDITION_TOL * max(1.0, abs(scale))))


def _spectral(dec, fun) -> np.ndarray:
    v = dec.eigenvectors
    out = (v * fun(dec.eigenvalues)) @ v.conj().T
    return (out + out.conj().T) / 2


def _tr(a) -> float:
    return float(np.trace(a).real)


# --------------------------------------------------------------------------- #
#                              Klein and Gibbs                                #
# --------------------------------------------------------------------------- #

def check_klein(w, x, y, f="xlogx", mode=TraceMode.SANDWICHED, tol: float = SLACK_TOL,
                comm_tol: float = COMM_TOL) -> Verdict:
    """tr W(f(Y) - f(X)) >= tr W(Y - X) f'(X).

    The sandwiched right-hand side is ``tr(L Y L f'(X)) - tr(W X f'(X))`` with
    ``L = sqrt(W)``. The literal form is only asserted when ``[W, X] = 0``
    (otherwise the verdict is vacuous), where the two coincide.
    """
    mode = trace_mode(mode)
    f = scalar_function(f)
    if not f.convex or f.derivative is None:
        raise LinalgError(f"{f.name} is not a convex function with a derivative")
    w, x, y = (np.asarray(m, dtype=complex) for m in (w, x, y))
    dx, dy = hermitian_eig(x), hermitian_eig(y)
    for name, dec in (("X", dx), ("Y", dy)):
        lam = dec.eigenvalues
        # closed edge: allow eigensolver noise below it (rank-deficient Y under x ln x)
        slop = 0.0 if f.open_min else st.PSD_TOL * max(1.0, abs(lam[0]))
        low = lam[-1] <= f.domain_min if f.open_min else lam[-1] < f.domain_min - slop
        if low:
            raise DomainError(f"spectrum of {name} leaves the domain of {f.name}: {lam[-1]:.3e}")
    if f.name == "xlogx" and dx.eigenvalues[-1] <= 0:
        raise DomainError("f'(X) = log X + 1 needs X positive definite")
    fx = _spectral(dx, f.value)
    fy = _spectral(dy, f.value)
    dfx = _spectral(dx, f.derivative)
    xdfx = _spectral(dx, lambda lam: lam * f.derivative(lam))
    lhs = hermitian_trace(w, fy - fx)
    lit = trace_product(w @ (y - x), dfx)
    l = sqrt_psd(w)
    sand = hermitian_trace(l @ y @ l, dfx) - hermitian_trace(w, xdfx)
    comm = commutator_norm(w, x)
    conditions = {}
    if mode is TraceMode.LITERAL:
        rhs, residues = lit.real, {"rhs": abs(lit.imag)}
        conditions["commuting"] = Condition(comm, comm <= comm_tol)
    else:
        rhs, residues = sand, {}
    return make_verdict("klein", lhs, rhs, lhs - rhs, tol, conditions, residues,
                        diagnostics={"rhs_literal": lit.real, "rhs_sandwiched": sand,
                                     "commutator_WX": comm, "mode_gap": abs(lit.real - sand)},
                        mode=mode)


def check_gibbs(rho, sigma, phi, mode=TraceMode.SANDWICHED, tol: float = SLACK_TOL) -> Verdict:
    """D_phi(rho || sigma) >= 0 under tr(phi rho) >= tr(phi sigma)."""
    mode = trace_mode(mode)
    rho, sigma, phi = (np.asarray(m, dtype=complex) for m in (rho, sigma, phi))
    cond = hermitian_trace(phi, rho) - hermitian_trace(phi, sigma)
    d = weighted_relative_entropy(rho, sigma, phi, mode)
    other = weighted_relative_entropy(
        rho, sigma, phi, TraceMode.SANDWICHED if mode is TraceMode.LITERAL else TraceMode.LITERAL)
    diag = {"other_mode": other.value, "distance": float(np.linalg.norm(rho - sigma))}
    return make_verdict("gibbs", 0.0, d.value, d.value, tol,
                        {"trace": _ge(cond, hermitian_trace(phi, rho))},
                        {"divergence": d.imag_residue}, diagnostics=diag, mode=mode)


# --------------------------------------------------------------------------- #
#                          basic properties and bounds                        #
# --------------------------------------------------------------------------- #

def check_entropy_bounds(rho, phi, tol: float = SLACK_TOL) -> Verdict:
    """Non-negativity, the zero characterisation, and the upper bound for P/m.

    Three candidate upper bounds are reported: ``(ln m) tr(phi)``,
    the direct value ``S_phi(P/m)`` and ``(ln m) tr(phi rho)``, which is the
    one obtained from the sandwiched Gibbs inequality with sigma = P/m. Only
    the last is asserted, and only for a positive definite weight.
    """
    rho, phi = (np.asarray(m, dtype=complex) for m in (rho, phi))
    d = rho.shape[0]
    info = support_info(phi)
    m = info.rank
    if m == 0:
        raise LinalgError("weight is zero")
    s = weighted_entropy(rho, phi)
    tr_phi = _tr(phi)
    tr_phi_rho = hermitian_trace(phi, rho)
    stated = math.log(m) * tr_phi
    direct = weighted_entropy(info.projector / m, phi).value
    gibbs = math.log(m) * tr_phi_rho

    dec = hermitian_eig(rho)
    lam = dec.eigenvalues
    wdiag = np.einsum("ji,jk,ki->i", dec.eigenvectors.conj(), phi, dec.eigenvectors).real
    pure = bool(lam[0] > 1 - 1e-9)
    mixed = (lam > 1e-9) & (lam < 1 - 1e-9)
    zero_weights = bool(np.all(wdiag[mixed] <= 1e-9))
    is_zero = s.value <= tol
    conditions = {
        "trace": _ge(tr_phi_rho - tr_phi / m, tr_phi),
        "definite": Condition(float(m), m == d),
    }
    diagnostics = {
        "rank": m, "entropy": s.value, "stated_bound": stated, "direct_bound": direct,
        "direct_formula": math.log(m) / m * tr_phi, "gibbs_bound": gibbs,
        "pure": pure, "zero": is_zero, "zero_characterisation_ok": is_zero == (pure or zero_weights),
    }
    return make_verdict("bounds", s.value, gibbs, gibbs - s.value, tol, conditions,
                        {"entropy": s.imag_residue}, {"nonnegative": s.value}, diagnostics)


def _purification_pair(rho_src, phi_src, rho_dst):
    try:
        phi_dst = st.cross_conjugate_weight(rho_src, phi_src, rho_dst)
    except st.PairingError as exc:
        return None, str(exc)
    return phi_dst, ""


def check_purification(rho, phi, dims: Sequence[int] | None = None, phi_a=None,
                       tol: float = 1e-10) -> Verdict:
    """S_phi(rho) = S_phi_R(rho_R) for the canonical purification.

    With ``dims = [dA, dB]`` and a weight ``phi_a`` on A, also checks
    ``S_phi_A(rho_A) = S_phi_BR(rho_BR)`` on the tripartite purification.
    """
    rho, phi = (np.asarray(m, dtype=complex) for m in (rho, phi))
    d = rho.shape[0]
    chi = st.purify(rho)
    big = st.projector(chi)
    full = [d, d] if dims is None else [*dims, d]
    n = len(full)
    rho_r = partial_trace(big, full, [n - 1])
    phi_r, why = _purification_pair(rho, phi, rho_r)
    conditions = {"pairing": Condition(0.0 if phi_r is None else 1.0, phi_r is not None)}
    diagnostics = {"pairing_error": why} if why else {}
    lhs = weighted_entropy(rho, phi).value
    rhs = weighted_entropy(rho_r, phi_r).value if phi_r is not None else math.nan
    assertions = {}
    if dims is not None:
        if len(dims) != 2:
            raise LinalgError("bipartite purification needs two factors")
        phi_a = np.eye(dims[0]) if phi_a is None else np.asarray(phi_a, dtype=complex)
        rho_a = partial_trace(rho, dims, [0])
        rho_br = partial_trace(big, full, [1, 2])
        phi_br, why2 = _purification_pair(rho_a, phi_a, rho_br)
        conditions["pairing_marginal"] = Condition(0.0 if phi_br is None else 1.0, phi_br is not None)
        if phi_br is not None:
            sa = weighted_entropy(rho_a, phi_a).value
            sbr = weighted_entropy(rho_br, phi_br).value
            assertions["marginal_equality"] = -abs(sa - sbr)
            diagnostics.update(S_A=sa, S_BR=sbr)
        else:
            diagnostics["pairing_marginal_error"] = why2
    slack = -abs(lhs - rhs) if phi_r is not None else math.nan
    return make_verdict("purification", lhs, rhs, slack, tol, conditions,
                        assertions=assertions, diagnostics=diagnostics)


def check_diagonalisation(rho, phi, basis, mode=TraceMode.LITERAL, tol: float = SLACK_TOL) -> Verdict:
    """S_psi(rho^d) >= S_phi(rho) under tr(phi rho) >= tr(phi rho^d).

    ``S_psi(rho^d) = -sum_j <f_j|phi rho|f_j> ln <f_j|rho|f_j>``; the
    sandwiched mode uses ``<f_j|L rho L|f_j>`` instead.
    """
    mode = trace_mode(mode)
    rho, phi = (np.asarray(m, dtype=complex) for m in (rho, phi))
    u = st.check_unitary(basis)
    rho_d = st.diagonal_part(rho, u)
    p = np.einsum("ji,jk,ki->i", u.conj(), rho, u).real
    q = np.einsum("ji,jk,ki->i", u.conj(), weighted_operator(rho, phi, mode), u)
    on = p > SUPPORT_TOL * p.max()
    terms = q[on] * np.log(p[on])
    rhs = float(-terms.real.sum())
    s = weighted_entropy(rho, phi)
    cond = hermitian_trace(phi, rho) - hermitian_trace(phi, rho_d)
    return make_verdict("diagonalisation", s.value, rhs, rhs - s.value, tol,
                        {"trace": _ge(cond, hermitian_trace(phi, rho))},
                        {"lhs": s.imag_residue, "rhs": abs(terms.imag.sum())},
                        diagnostics={"distance": float(np.linalg.norm(rho - rho_d))}, mode=mode)


# --------------------------------------------------------------------------- #
#                       subadditivity, concavity, Araki-Lieb                  #
# --------------------------------------------------------------------------- #

def check_subadditivity(rho, phi_a, phi_b, dims: Sequence[int] | None = None,
                        mode=TraceMode.LITERAL, tol: float = SLACK_TOL) -> Verdict:
    """S_phi(rho_AB) <= S_psi_A(rho_A) + S_psi_B(rho_B) for phi = phi_A (x) phi_B."""
    mode = trace_mode(mode)
    rho, phi_a, phi_b = (np.asarray(m, dtype=complex) for m in (rho, phi_a, phi_b))
    dims = [phi_a.shape[0], phi_b.shape[0]] if dims is None else list(dims)
    phi = tensor(phi_a, phi_b)
    rho_a = partial_trace(rho, dims, [0])
    rho_b = partial_trace(rho, dims, [1])
    tr_joint = hermitian_trace(phi, rho)
    tr_prod = hermitian_trace(phi_a, rho_a) * hermitian_trace(phi_b, rho_b)
    s = weighted_entropy(rho, phi)
    wop = weighted_operator(rho, phi, mode)
    ra = reduced_weighted_entropy(rho, phi, dims, [0], mode, weighted=wop)
    rb = reduced_weighted_entropy(rho, phi, dims, [1], mode, weighted=wop)
    rhs = ra.value + rb.value
    return make_verdict(
        "subadditivity", s.value, rhs, rhs - s.value, tol,
        {"trace": _ge(tr_joint - tr_prod, tr_joint)},
        {"joint": s.imag_residue, "A": ra.imag_residue, "B": rb.imag_residue},
        diagnostics={"distance": float(np.linalg.norm(rho - tensor(rho_a, rho_b))),
                     "S_A": ra.value, "S_B": rb.value},
        mode=mode)


def check_concavity(states: Sequence, b, phi, tol: float = SLACK_TOL) -> Verdict:
    """S_phi(sum_l b_l rho_l) >= sum_l b_l S_phi(rho_l), plus the block-state identity.

    The joint state rho on A (x) R (block diagonal, blocks b_l rho_l) must
    satisfy ``S_{phi (x) 1_R}(rho) = sum_l b_l S_phi(rho_l) + h_B(b)`` with
    ``B_l = tr(phi rho_l)``; the deviation is asserted as an extra margin.
    """
    states = [np.asarray(s_, dtype=complex) for s_ in states]
    b = np.asarray(b, dtype=float)
    phi = np.asarray(phi, dtype=complex)
    if len({s_.shape for s_ in states}) != 1 or phi.shape != states[0].shape:
        raise LinalgError("states and weight must share one dimension")
    if len(states) != b.size:
        raise LinalgError(f"{len(states)} states but {b.size} probabilities")
    r, d = len(states), phi.shape[0]
    sigma = sum(bl * s_ for bl, s_ in zip(b, states))
    each = [weighted_entropy(s_, phi).value for s_ in states]
    avg = float(np.dot(b, each))
    lhs = weighted_entropy(sigma, phi).value

    joint = st.block_joint_state(states, b)
    lam_min = float(np.linalg.eigvalsh(joint)[0])
    big_phi = tensor(phi, np.eye(r))
    joint_s = weighted_entropy(joint, big_phi).value
    bweights = np.array([hermitian_trace(phi, s_) for s_ in states])
    identity_rhs = avg + weighted_shannon(b, bweights)
    rho_a = partial_trace(joint, [d, r], [0])
    rho_r = partial_trace(joint, [d, r], [1])
    sub_lhs = hermitian_trace(big_phi, joint)
    sub_rhs = hermitian_trace(big_phi, tensor(rho_a, rho_r))
    assertions = {
        "identity": -abs(joint_s - identity_rhs),
        "joint_psd": lam_min,
        "joint_trace": -abs(_tr(joint) - 1.0),
        "marginal": -float(np.linalg.norm(rho_a - sigma)),
        "subadditivity_condition": sub_lhs - sub_rhs,
    }
    diagnostics = {"identity_error": abs(joint_s - identity_rhs), "joint_entropy": joint_s,
                   "subadditivity_condition_lhs": sub_lhs, "subadditivity_condition_rhs": sub_rhs,
                   "weighted_shannon": weighted_shannon(b, bweights)}
    return make_verdict("concavity", lhs, avg, lhs - avg, tol, assertions=assertions,
                        diagnostics=diagnostics)


def _diag_in(dec, op) -> np.ndarray:
    v = dec.eigenvectors
    return np.einsum("ji,jk,ki->i", v.conj(), op, v)


def _araki_lieb_candidates(d_b: int, d_r: int, lam, phi_diag, rho_br, gen, count: int):
    """Trial weights phi_BR: identity, solved products, random products, eigenbasis-diagonal."""
    out = [("identity", np.eye(d_b * d_r, dtype=complex))]
    on = lam > SUPPORT_TOL
    for k in range(count):
        family = k % 3
        if family == 0:
            # phi_B' (x) diag(c), with c solved so psi_R* has the target diagonal
            phi_b = np.eye(d_b, dtype=complex) if k == 0 else st.sample_weight(d_b, gen)
            m = partial_trace(tensor(phi_b, np.eye(d_r)) @ rho_br, [d_b, d_r], [1])
            c = np.ones(d_r)
            mdiag = np.diag(m).real
            c[on] = phi_diag[on] * lam[on] / mdiag[on]
            out.append(("solved_product", tensor(phi_b, np.diag(c))))
        elif family == 1:
            out.append(("random_product", tensor(st.sample_weight(d_b, gen), st.sample_weight(d_r, gen))))
        else:
            dec = hermitian_eig(rho_br)
            g = dec.eigenvectors
            rank = int(np.sum(dec.eigenvalues > SUPPORT_TOL))
            # least-squares fit of eigenbasis-diagonal entries to the R-conjugacy constraint
            a = np.empty((d_r, rank))
            for j in range(rank):
                gk = g[:, j:j + 1] @ g[:, j:j + 1].conj().T
                a[:, j] = dec.eigenvalues[j] * np.diag(partial_trace(gk, [d_b, d_r], [1])).real
            target = phi_diag * lam
            coef = np.clip(np.linalg.lstsq(a[on], target[on], rcond=None)[0], 0.0, None)
            if k > 2:
                coef = coef * np.exp(0.05 * gen.standard_normal(rank))
            entries = np.ones(g.shape[1])
            entries[:rank] = coef
            out.append(("eigenbasis_diagonal", (g * entries) @ g.conj().T))
    return out


def _araki_lieb_direction(rho, phi, dims, count, gen, mode, conj_tol):
    """Candidates for S_phi(rho) >= S_psi_A(rho_A) - S_psi_B(rho_B), A = first factor."""
    d_a, d_b = dims
    d = d_a * d_b
    dec = hermitian_eig(rho)
    lam = np.clip(dec.eigenvalues, 0.0, None)
    st.check_nondegenerate(lam, st.support_rank(lam))
    phi_diag = _diag_in(dec, phi).real
    chi = st.purify(rho)
    big = st.projector(chi)
    full = [d_a, d_b, d]
    rho_br = partial_trace(big, full, [1, 2])
    rho_a = partial_trace(rho, dims, [0])
    rho_b = partial_trace(rho, dims, [1])
    rho_r = partial_trace(big, full, [2])
    prod_br = tensor(rho_b, rho_r)
    mixed = (lam > conj_tol) & (lam < 1 - conj_tol)
    dec_b = hermitian_eig(rho_b)
    mu = dec_b.eigenvalues
    on_b = mu > SUPPORT_TOL * mu[0]
    log_b = np.zeros_like(mu)
    log_b[on_b] = np.log(mu[on_b])

    results = []
    for family, phi_br in _araki_lieb_candidates(d_b, d, lam, phi_diag, rho_br, gen, count):
        cond = hermitian_trace(phi_br, rho_br) - hermitian_trace(phi_br, prod_br)
        wop = weighted_operator(rho_br, phi_br, mode)
        m_r = partial_trace(wop, [d_b, d], [1])
        psi_r_diag = np.zeros(d)
        psi_r_diag[lam > 0] = np.diag(m_r).real[lam > 0] / lam[lam > 0]
        conj_err = float(np.max(np.abs(psi_r_diag[mixed] - phi_diag[mixed]), initial=0.0))
        admissible = cond >= -CONDITION_TOL * max(1.0, abs(hermitian_trace(phi_br, rho_br))) \
            and conj_err <= conj_tol
        rec = {"family": family, "trace_condition": cond, "conjugacy_error": conj_err,
               "admissible": bool(admissible)}
        if admissible:
            psi_a = st.cross_conjugate_weight(rho_br, phi_br, rho_a)
            s_a = weighted_entropy(rho_a, psi_a).value
            n_b = partial_trace(wop, [d_b, d], [0])
            psi_b_diag = np.zeros_like(mu)
            psi_b_diag[on_b] = _diag_in(dec_b, n_b).real[on_b] / mu[on_b]
            s_b = float(-np.sum(psi_b_diag * mu * log_b))
            t_b = trace_product(n_b, log_on_support(rho_b))
            rec.update(S_A=s_a, S_B=s_b, S_B_trace=-t_b.real, imag=abs(t_b.imag),
                       S_BR=weighted_entropy(rho_br, phi_br).value)
        results.append(rec)
    return results


def check_araki_lieb(rho, phi, dims: Sequence[int], candidates: int = 6, rng=None,
                     mode=TraceMode.LITERAL, tol: float = SLACK_TOL,
                     conj_tol: float = CONJ_TOL) -> Verdict:
    """S_phi(rho) >= S_psi_A(rho_A) - S_psi_B(rho_B) over sampled members of D(phi).

    For each trial phi_BR on the purifying system the two membership tests
    (trace condition, conjugacy of psi_R* to phi) are evaluated; admissible
    trials give a pair (psi_A, psi_B) whose bound is asserted. The mirrored
    bound is obtained by exchanging A and B. The slack is the minimum over
    all admissible trials in both directions.
    """
    mode = trace_mode(mode)
    rho, phi = (np.asarray(m, dtype=complex) for m in (rho, phi))
    dims = [int(x) for x in dims]
    gen = np.random.default_rng(0) if rng is None else st._gen(rng)
    lhs = weighted_entropy(rho, phi)
    try:
        fwd = _araki_lieb_direction(rho, phi, dims, candidates, gen, mode, conj_tol)
        swapped = ([1, 0], dims[::-1])
        rev = _araki_lieb_direction(permute_factors(rho, dims, swapped[0]),
                                    permute_factors(phi, dims, swapped[0]),
                                    swapped[1], candidates, gen, mode, conj_tol)
    except st.PairingError as exc:
        return make_verdict("araki_lieb", lhs.value, math.nan, math.nan, tol,
                            {"nondegenerate": Condition(0.0, False)},
                            diagnostics={"pairing_error": str(exc), "admissible": 0}, mode=mode)
    bounds = [r["S_A"] - r["S_B"] for r in fwd if r["admissible"]]
    bounds += [r["S_A"] - r["S_B"] for r in rev if r["admissible"]]
    n_adm = len(bounds)
    rhs = max(bounds) if bounds else math.nan
    slack = lhs.value - rhs if bounds else math.nan
    # each admissible bound pair: |S_psiA(rho_A) - S_phiBR(rho_BR)| must vanish
    conj_gap = max((abs(r["S_A"] - r["S_BR"]) for r in fwd + rev if r["admissible"]), default=0.0)
    residue = max((r["imag"] for r in fwd + rev if r["admissible"]), default=0.0)
    diag = {
        "admissible": n_adm, "tried": len(fwd) + len(rev),
        "admissible_forward": sum(r["admissible"] for r in fwd),
        "admissible_reverse": sum(r["admissible"] for r in rev),
        "admissible_families": sorted({r["family"] for r in fwd + rev if r["admissible"]}),
        "vn_bound": abs(_vn_marginal(rho, dims, 0) - _vn_marginal(rho, dims, 1)),
    }
    return make_verdict("araki_lieb", lhs.value, rhs, slack, tol,
                        {"nondegenerate": Condition(1.0, True),
                         "admissible": Condition(float(n_adm), n_adm > 0)},
                        {"entropy": lhs.imag_residue, "reduced": residue},
                        {"conjugate_equality": -conj_gap}, diag, mode)


def _vn_marginal(rho, dims, k) -> float:
    return von_neumann_entropy(partial_trace(rho, dims, [k]))


# --------------------------------------------------------------------------- #
#                         strong subadditivity and Lieb                       #
# --------------------------------------------------------------------------- #

def check_ssa(rho, phi_a, phi_b, phi_c, dims: Sequence[int] | None = None,
              mode=TraceMode.LITERAL, tol: float = SLACK_TOL, comm_tol: float = COMM_TOL) -> Verdict:
    """S_phi(rho_ABC) + S_psi_B(rho_B) <= S_psi_AB(rho_AB) + S_psi_BC(rho_BC).

    Condition (i) compares tr(phi rho) with
    ``Re tr_B{phi_B tr_A(phi_A rho_AB) tr_C(phi_C rho_BC) rho_B^-1}``; a
    singular rho_B is inverted on its support and flagged. Condition (ii) is
    the pair of commutators, accepted as stated or with A and C exchanged.
    """
    mode = trace_mode(mode)
    rho, phi_a, phi_b, phi_c = (np.asarray(m, dtype=complex) for m in (rho, phi_a, phi_b, phi_c))
    dims = [phi_a.shape[0], phi_b.shape[0], phi_c.shape[0]] if dims is None else list(dims)
    if len(dims) != 3:
        raise LinalgError(f"strong subadditivity needs three factors, got {dims}")
    d_a, d_b, d_c = dims
    rho_ab = partial_trace(rho, dims, [0, 1])
    rho_bc = partial_trace(rho, dims, [1, 2])
    rho_b = partial_trace(rho, dims, [1])
    x = partial_trace(tensor(phi_a, np.eye(d_b)) @ rho_ab, [d_a, d_b], [1])
    y = partial_trace(tensor(np.eye(d_b), phi_c) @ rho_bc, [d_b, d_c], [0])
    info = support_info(rho_b)
    phi = tensor(phi_a, phi_b, phi_c)
    tr_joint = hermitian_trace(phi, rho)
    bound = trace_product(phi_b @ x @ y, info.pseudo_inverse)
    c1 = commutator_norm(rho_ab, tensor(phi_a, phi_b))
    c2 = commutator_norm(y, rho_b)
    c3 = commutator_norm(rho_bc, tensor(phi_b, phi_c))
    c4 = commutator_norm(x, rho_b)
    comm = min(max(c1, c2), max(c3, c4))
    conditions = {"trace": _ge(tr_joint - bound.real, tr_joint),
                  "commutators": Condition(comm, comm <= comm_tol)}
    wop = weighted_operator(rho, phi, mode)
    s = weighted_entropy(rho, phi)
    r_b = reduced_weighted_entropy(rho, phi, dims, [1], mode, weighted=wop)
    r_ab = reduced_weighted_entropy(rho, phi, dims, [0, 1], mode, weighted=wop)
    r_bc = reduced_weighted_entropy(rho, phi, dims, [1, 2], mode, weighted=wop)
    lhs = s.value + r_b.value
    rhs = r_ab.value + r_bc.value
    diagnostics = {"rho_B_singular": info.rank < d_b, "rho_B_rank": info.rank,
                   "commutators_stated": max(c1, c2), "commutators_interchanged": max(c3, c4),
                   "condition_bound": bound.real}
    return make_verdict("ssa", lhs, rhs, rhs - lhs, tol, conditions,
                        {"joint": s.imag_residue, "B": r_b.imag_residue, "AB": r_ab.imag_residue,
                         "BC": r_bc.imag_residue, "condition": abs(bound.imag)},
                        diagnostics=diagnostics, mode=mode)


def lieb_rhs(w, x, y, z) -> float:
    """tr(K_W(Z) T_{exp(-X)}(e^Y))."""
    t = lieb_T(matrix_func(-np.asarray(x), "exp"), matrix_func(y, "exp"))
    return hermitian_trace(k_w(z, w), t)


def check_lieb_triple(w, x, y, z, tol: float = SLACK_TOL) -> Verdict:
    """tr(W e^{X+Y+Z}) <= tr(K_W(Z) T_{exp(-X)}(e^Y)).

    Also asserts the unweighted case (W = 1) and the Golden-Thompson
    inequality tr e^{X+Y} <= tr(e^X e^Y).
    """
    w, x, y, z = (np.asarray(m, dtype=complex) for m in (w, x, y, z))
    d = w.shape[0]
    e_xyz = matrix_func(x + y + z, "exp")
    lhs = hermitian_trace(w, e_xyz)
    ex, ey = matrix_func(-x, "exp"), matrix_func(y, "exp")
    t = lieb_T(ex, ey)
    rhs = hermitian_trace(k_w(z, w), t)
    lhs_1 = _tr(e_xyz)
    rhs_1 = hermitian_trace(matrix_func(z, "exp"), t)
    gt_lhs = _tr(matrix_func(x + y, "exp"))
    gt_rhs = hermitian_trace(matrix_func(x, "exp"), ey)
    assertions = {"unweighted": rhs_1 - lhs_1, "golden_thompson": gt_rhs - gt_lhs}
    diagnostics = {"relative_slack": (rhs - lhs) / max(abs(lhs), 1e-300),
                   "gt_via_T": _tr(lieb_T(ex, ey)), "gt_rhs": gt_rhs, "gt_lhs": gt_lhs,
                   "dim": d}
    return make_verdict("lieb_triple", lhs, rhs, rhs - lhs, tol, assertions=assertions,
                        diagnostics=diagnostics)
