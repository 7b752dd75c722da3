"""Counterexample search with the side conditions deliberately broken.

A target is either ``"<theorem>:<condition>"``, which draws from a
hand-built family on which the named condition fails by construction, or a
bare ``"<theorem>"``, which draws from the configured ensemble and looks for a
failure with every condition satisfied.

Families (classical ones are rotated by a local Haar unitary when the
configured ensemble is ``commuting-weight``):

gibbs:trace
    Diagonal rho, sigma, phi. rho puts its largest probabilities on the
    smallest weights and sigma the reverse; for d = 2 this is the family
    diag(p, 1-p), diag(q, 1-q), diag(w, 1).
bounds:trace
    rho is an exponential tilt of the uniform state towards the small
    eigenvalues of phi, so tr(phi rho) < tr(phi)/m.
diagonalisation:trace
    rho = rho^d - eps * offdiag_f(phi); then tr(phi rho) - tr(phi rho^d) is
    minus eps times the squared off-diagonal norm of phi in the basis f.
subadditivity:trace
    Classical, with the A and B weights coupled anti-monotonically, which
    makes the weight covariance negative.
ssa:trace
    Classical, with A and C anti-monotone given each b, which makes
    E_b[w_B Cov(w_A, w_C | b)] negative.
ssa:commutators
    The generic ensemble, where the commutator condition fails almost surely.
klein:commuting
    Literal-mode Klein on generic, non-commuting (W, X).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .. import states as st
from ..linalg import tensor
from ..states import RngStream
from . import ensembles, records
from .campaign import CampaignError, InstanceRunner, _open_output
from .config import CampaignConfig, ConfigError, default_dims


def _diag_weights(d, gen, kind):
    if kind == "identity":
        return np.ones(d)
    return np.abs(st.ginibre(d, 1, gen)[:, 0]) ** 2 + 0.1


def _mix_uniform(p, gen):
    eta = 0.05 * gen.uniform()
    return (1 - eta) * p + eta / p.size


def _anti_coupling(wx, wy, gen):
    """Joint probability on X x Y supported on an anti-monotone matching."""
    dx, dy = wx.size, wy.size
    k = min(dx, dy)
    ox, oy = np.argsort(wx), np.argsort(wy)[::-1]
    ix = ox[np.round(np.linspace(0, dx - 1, k)).astype(int)]
    iy = oy[np.round(np.linspace(0, dy - 1, k)).astype(int)]
    joint = np.zeros((dx, dy))
    joint[ix, iy] = st.sample_probability(k, gen)
    return _mix_uniform(joint.reshape(-1), gen).reshape(dx, dy)


def _rotate_local(dims, gen, rho, factor_weights):
    us = [st.sample_unitary(k, gen) for k in dims]
    u = tensor(*us)
    return u @ rho @ u.conj().T, [v @ w @ v.conj().T for v, w in zip(us, factor_weights)]


def _gibbs_trace(ensemble, dims, gen, kind):
    d = math.prod(dims)
    w = _diag_weights(d, gen, kind)
    order = np.argsort(w)
    p, q = np.zeros(d), np.zeros(d)
    p[order] = np.sort(st.sample_probability(d, gen))[::-1]
    q[order] = np.sort(st.sample_probability(d, gen))
    rho, sigma, phi = (np.diag(x).astype(complex) for x in (p, q, w))
    if ensemble == "commuting-weight":
        u = st.sample_unitary(d, gen)
        rho, sigma, phi = (u @ m @ u.conj().T for m in (rho, sigma, phi))
    return dict(rho=rho, sigma=sigma, phi=phi)


def _bounds_trace(ensemble, dims, gen, kind):
    d = math.prod(dims)
    phi = np.eye(d, dtype=complex) if kind == "identity" else st.sample_weight(d, gen)
    mu, v = np.linalg.eigh(phi)
    beta = 0.1 + gen.exponential(2.0)
    p = np.exp(-beta * mu / mu.mean())
    rho = (v * (p / p.sum())) @ v.conj().T
    return dict(rho=(rho + rho.conj().T) / 2, phi=phi)


def _diagonalisation_trace(ensemble, dims, gen, kind):
    d = math.prod(dims)
    u = st.sample_unitary(d, gen)
    phi = np.eye(d, dtype=complex) if kind == "identity" else st.sample_weight(d, gen)
    p = st.sample_probability(d, gen)
    h = u.conj().T @ phi @ u
    np.fill_diagonal(h, 0)
    norm = np.linalg.norm(h, 2)
    eps = 0.0 if norm == 0 else gen.uniform(0.2, 0.9) * p.min() / norm
    rho = u @ (np.diag(p) - eps * h) @ u.conj().T
    return dict(rho=(rho + rho.conj().T) / 2, phi=phi, basis=u)


def _subadditivity_trace(ensemble, dims, gen, kind):
    wa, wb = (_diag_weights(k, gen, kind) for k in dims)
    rho = np.diag(_anti_coupling(wa, wb, gen).reshape(-1)).astype(complex)
    ws = [np.diag(w).astype(complex) for w in (wa, wb)]
    if ensemble == "commuting-weight":
        rho, ws = _rotate_local(dims, gen, rho, ws)
    return dict(rho=rho, phi_a=ws[0], phi_b=ws[1], dims=list(dims))


def _ssa_trace(ensemble, dims, gen, kind):
    da, db, dc = dims
    wa, wb, wc = (_diag_weights(k, gen, kind) for k in dims)
    pb = st.sample_probability(db, gen)
    p = np.stack([pb[b] * _anti_coupling(wa, wc, gen) for b in range(db)], axis=1)
    rho = np.diag(p.reshape(-1)).astype(complex)
    ws = [np.diag(w).astype(complex) for w in (wa, wb, wc)]
    if ensemble == "commuting-weight":
        rho, ws = _rotate_local(dims, gen, rho, ws)
    return dict(rho=rho, phi_a=ws[0], phi_b=ws[1], phi_c=ws[2], dims=list(dims))


def _generic(theorem):
    def family(ensemble, dims, gen, kind):
        return ensembles.build(theorem, "generic", dims, gen, kind)
    return family


# target -> (theorem, condition, family, default dims, forced mode)
TARGETS = {
    "gibbs:trace": ("gibbs", "trace", _gibbs_trace, (2,), None),
    "bounds:trace": ("bounds", "trace", _bounds_trace, (3,), None),
    "diagonalisation:trace": ("diagonalisation", "trace", _diagonalisation_trace, (3,), None),
    "subadditivity:trace": ("subadditivity", "trace", _subadditivity_trace, (2, 2), None),
    "ssa:trace": ("ssa", "trace", _ssa_trace, (2, 2, 2), None),
    "ssa:commutators": ("ssa", "commutators", _generic("ssa"), (2, 2, 2), None),
    "klein:commuting": ("klein", "commuting", _generic("klein"), (3,), "literal"),
}


def resolve_target(target: str):
    """(theorem, condition or None, default dims) for a target string."""
    if target in TARGETS:
        theorem, cond, _, dims, _ = TARGETS[target]
        return theorem, cond, dims
    if target in ensembles.SPECS:
        return target, None, default_dims(target)
    raise ConfigError(f"unknown search target {target!r}; choose from "
                      f"{', '.join(list(TARGETS) + list(ensembles.SPECS))}")


@dataclass
class SearchOutcome:
    target: str
    found: bool
    trials: int
    record: dict | None
    condition_broken: int
    wall_time: float

    @property
    def exhausted(self) -> bool:
        return not self.found

    def to_dict(self) -> dict:
        return {"target": self.target, "found": self.found, "exhausted": self.exhausted,
                "trials": self.trials, "condition_broken": self.condition_broken,
                "wall_time": self.wall_time, "record": self.record}


class _FamilyRunner(InstanceRunner):
    def __init__(self, config, family, forced_mode):
        super().__init__(config)
        self.family, self.forced_mode = family, forced_mode

    def kwargs(self, gen):
        cfg = self.config
        kw = self.family(cfg.ensemble, cfg.dims, gen, cfg.weight)
        kw.update(self.overrides)
        kw["tol"] = cfg.effective_tol
        if cfg.theorem in ensembles.MODE_THEOREMS:
            kw["mode"] = self.forced_mode or cfg.effective_mode
        if cfg.theorem == "araki_lieb":
            kw["candidates"] = cfg.candidates
        return kw


def search_counterexample(config: CampaignConfig) -> SearchOutcome:
    """Return the first trial whose slack is below ``-tolerance`` with the target condition broken.

    Only the named condition may fail; trials that break other conditions too
    are skipped, so a hit isolates that one condition.

    For a bare theorem target the trial must instead satisfy every condition
    and fail. Running out of ``max_trials`` gives ``found=False``.
    """
    if config.search is None:
        raise ConfigError("configuration has no search target")
    target = config.search.target
    theorem, cond, _ = resolve_target(target)
    if theorem != config.theorem:
        config = config.with_(theorem=theorem)
    if cond is None:
        ensembles.validate(theorem, config.ensemble, config.dims)
        runner = InstanceRunner(config)
    else:
        _, _, family, _, forced = TARGETS[target]
        factors = ensembles.SPECS[theorem][3]
        if factors is not None and len(config.dims) not in factors:
            raise ConfigError(f"{target} needs {factors[0]} factor(s), got {list(config.dims)}")
        if config.ensemble not in ("generic", "classical", "commuting-weight"):
            raise ConfigError(f"{target} is not defined for ensemble {config.ensemble!r}")
        runner = _FamilyRunner(config, family, forced)

    t0 = time.perf_counter()
    broken, found = 0, None
    trials = 0
    for i in range(config.search.max_trials):
        trials = i + 1
        rec = runner(i)
        if rec["status"] == "error":
            continue
        if cond is None:
            if rec["status"] == "fail":
                found = rec
                break
            continue
        conds = rec["conditions"]
        if not conds[cond]["ok"] and all(c["ok"] for k, c in conds.items() if k != cond):
            broken += 1
            if rec["slack"] < -rec["tol"]:
                found = rec
                break
    outcome = SearchOutcome(target, found is not None, trials, found, broken,
                            time.perf_counter() - t0)
    if config.output_path is not None and found is not None:
        out = _open_output(config.output_path)
        with out:
            out.write(records.dumps(records.header(config, runner.config_hash)) + "\n")
            out.write(records.dumps(found) + "\n")
    return outcome


def instance_for(config: CampaignConfig, index: int) -> dict:
    """Checker kwargs of trial ``index``, for inspecting a found counterexample."""
    theorem, cond, _ = resolve_target(config.search.target)
    gen = RngStream(config.seed, index).generator()
    if cond is None:
        return ensembles.build(theorem, config.ensemble, config.dims, gen, config.weight)
    return TARGETS[config.search.target][2](config.ensemble, config.dims, gen, config.weight)


__all__ = ["TARGETS", "SearchOutcome", "search_counterexample", "resolve_target",
           "instance_for", "CampaignError"]
