"""Instance generators: one builder per theorem, keyed by ensemble name.

A builder receives the subsystem dims, a ``numpy.random.Generator`` and the
weight kind, and returns the keyword arguments of the matching checker.

Ensembles
---------
generic
    Ginibre-induced full-rank states, random positive definite weights.
classical
    Everything diagonal in the computational (product) basis.
commuting-weight
    A classical instance rotated by a Haar-random local unitary, so states
    and weights commute without being diagonal.
product-state
    Tensor products of independent factor states.
pure-state
    Rank-one states.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .. import inequalities as ineq
from .. import states as st
from ..linalg import tensor

ENSEMBLES = ("generic", "classical", "commuting-weight", "product-state", "pure-state")


class ConfigError(ValueError):
    pass


def _weight(d, gen, kind):
    return np.eye(d, dtype=complex) if kind == "identity" else st.sample_weight(d, gen)


def _diag_weight(d, gen, kind):
    if kind == "identity":
        return np.eye(d, dtype=complex)
    return np.diag(np.abs(st.ginibre(d, 1, gen)[:, 0]) ** 2 + 0.1).astype(complex)


def _diag_state(d, gen):
    return np.diag(st.sample_probability(d, gen)).astype(complex)


def _rotate(u, *mats):
    return [u @ m @ u.conj().T for m in mats]


def _state(ensemble, dims, gen):
    d = math.prod(dims)
    if ensemble == "pure-state":
        return st.sample_density(d, 1, gen)
    if ensemble == "product-state":
        return tensor(*(st.sample_density(k, rng=gen) for k in dims))
    return st.sample_density(d, rng=gen)


def _factor_weights(ensemble, dims, gen, kind):
    """(state, [factor weights]) for the multi-factor theorems."""
    if ensemble in ("classical", "commuting-weight"):
        rho, ws = st.sample_classical_instance(dims, gen)
        if kind == "identity":
            ws = [np.eye(k, dtype=complex) for k in dims]
        if ensemble == "commuting-weight":
            us = [st.sample_unitary(k, gen) for k in dims]
            rho = _rotate(tensor(*us), rho)[0]
            ws = [u @ w @ u.conj().T for u, w in zip(us, ws)]
        return rho, ws
    rho = _state(ensemble, dims, gen)
    return rho, [_weight(k, gen, kind) for k in dims]


def _single_classical(ensemble, d, gen, kind, n_states):
    """n diagonal states plus a diagonal weight, optionally co-rotated."""
    mats = [_diag_state(d, gen) for _ in range(n_states)]
    w = _diag_weight(d, gen, kind)
    if ensemble == "commuting-weight":
        u = st.sample_unitary(d, gen)
        mats = _rotate(u, *mats)
        w = _rotate(u, w)[0]
        return mats, w, u
    return mats, w, np.eye(d, dtype=complex)


def klein(ensemble, dims, gen, kind):
    d = math.prod(dims)
    if ensemble in ("classical", "commuting-weight"):
        (x, y), w, _ = _single_classical(ensemble, d, gen, kind, 2)
        if ensemble == "commuting-weight":
            y = st.sample_density(d, rng=gen)
        return dict(w=w, x=x, y=y)
    w = _weight(d, gen, kind)
    x = st.sample_density(d, rng=gen)
    y = st.sample_density(d, 1 if ensemble == "pure-state" else d, gen)
    return dict(w=w, x=x, y=y)


def gibbs(ensemble, dims, gen, kind):
    d = math.prod(dims)
    if ensemble in ("classical", "commuting-weight"):
        (rho, sigma), phi, _ = _single_classical(ensemble, d, gen, kind, 2)
    else:
        phi = _weight(d, gen, kind)
        rho = _state(ensemble, [d], gen)
        sigma = st.sample_density(d, rng=gen)
    if ensemble != "pure-state" and np.trace(phi @ rho).real < np.trace(phi @ sigma).real:
        rho, sigma = sigma, rho
    return dict(rho=rho, sigma=sigma, phi=phi)


def bounds(ensemble, dims, gen, kind):
    d = math.prod(dims)
    if ensemble in ("classical", "commuting-weight"):
        (rho,), phi, _ = _single_classical(ensemble, d, gen, kind, 1)
        return dict(rho=rho, phi=phi)
    return dict(rho=_state(ensemble, [d], gen), phi=_weight(d, gen, kind))


def purification(ensemble, dims, gen, kind):
    d = math.prod(dims)
    if ensemble in ("classical", "commuting-weight"):
        (rho,), phi, _ = _single_classical(ensemble, d, gen, kind, 1)
    else:
        rho = _state(ensemble, dims, gen)
        phi = _weight(d, gen, kind)
    if len(dims) == 2:
        return dict(rho=rho, phi=phi, dims=list(dims), phi_a=_weight(dims[0], gen, kind))
    return dict(rho=rho, phi=phi)


def diagonalisation(ensemble, dims, gen, kind):
    d = math.prod(dims)
    if ensemble in ("classical", "commuting-weight"):
        (rho,), phi, u = _single_classical(ensemble, d, gen, kind, 1)
        return dict(rho=rho, phi=phi, basis=u)
    return dict(rho=_state(ensemble, [d], gen), phi=_weight(d, gen, kind),
                basis=st.sample_unitary(d, gen))


def subadditivity(ensemble, dims, gen, kind):
    rho, (wa, wb) = _factor_weights(ensemble, dims, gen, kind)
    return dict(rho=rho, phi_a=wa, phi_b=wb, dims=list(dims))


def concavity(ensemble, dims, gen, kind):
    d = math.prod(dims)
    r = int(gen.integers(2, 5))
    b = st.sample_probability(r, gen)
    if ensemble in ("classical", "commuting-weight"):
        states, phi, _ = _single_classical(ensemble, d, gen, kind, r)
    else:
        rank = 1 if ensemble == "pure-state" else d
        states = [st.sample_density(d, rank, gen) for _ in range(r)]
        phi = _weight(d, gen, kind)
    return dict(states=states, b=b, phi=phi)


def araki_lieb(ensemble, dims, gen, kind):
    if ensemble in ("classical", "commuting-weight"):
        rho, (wa, wb) = _factor_weights(ensemble, dims, gen, kind)
        phi = tensor(wa, wb)
    else:
        rho = _state(ensemble, dims, gen)
        phi = _weight(math.prod(dims), gen, kind)
    return dict(rho=rho, phi=phi, dims=list(dims), rng=gen)


def ssa(ensemble, dims, gen, kind):
    if ensemble == "product-state":
        rho_ab = st.sample_density(dims[0] * dims[1], rng=gen)
        rho = tensor(rho_ab, st.sample_density(dims[2], rng=gen))
        ws = [_weight(k, gen, kind) for k in dims]
    else:
        rho, ws = _factor_weights(ensemble, dims, gen, kind)
    return dict(rho=rho, phi_a=ws[0], phi_b=ws[1], phi_c=ws[2], dims=list(dims))


def lieb_triple(ensemble, dims, gen, kind):
    d = math.prod(dims)
    if ensemble in ("classical", "commuting-weight"):
        x, y, z = (np.diag(gen.standard_normal(d)).astype(complex) for _ in range(3))
        w = _diag_weight(d, gen, kind)
        if ensemble == "commuting-weight":
            x, y, z, w = _rotate(st.sample_unitary(d, gen), x, y, z, w)
        return dict(w=w, x=x, y=y, z=z)
    return dict(w=_weight(d, gen, kind), x=st.sample_hermitian(d, gen),
                y=st.sample_hermitian(d, gen), z=st.sample_hermitian(d, gen))


# theorem -> (builder, checker, allowed ensembles, factor counts, state key, weight key)
SPECS: dict[str, tuple] = {
    "klein": (klein, ineq.check_klein,
              {"generic", "classical", "commuting-weight", "pure-state"}, None, None, "w"),
    "gibbs": (gibbs, ineq.check_gibbs,
              {"generic", "classical", "commuting-weight", "pure-state"}, None, "rho", "phi"),
    "bounds": (bounds, ineq.check_entropy_bounds,
               {"generic", "classical", "commuting-weight", "pure-state"}, None, "rho", "phi"),
    "purification": (purification, ineq.check_purification,
                     {"generic", "classical", "commuting-weight", "pure-state", "product-state"},
                     (1, 2), "rho", "phi"),
    "diagonalisation": (diagonalisation, ineq.check_diagonalisation,
                        {"generic", "classical", "commuting-weight", "pure-state"}, None, "rho", "phi"),
    "subadditivity": (subadditivity, ineq.check_subadditivity, set(ENSEMBLES), (2,), "rho", None),
    "concavity": (concavity, ineq.check_concavity,
                  {"generic", "classical", "commuting-weight", "pure-state"}, None, None, "phi"),
    "araki_lieb": (araki_lieb, ineq.check_araki_lieb, set(ENSEMBLES), (2,), "rho", "phi"),
    "ssa": (ssa, ineq.check_ssa, set(ENSEMBLES), (3,), "rho", None),
    "lieb_triple": (lieb_triple, ineq.check_lieb_triple,
                    {"generic", "classical", "commuting-weight"}, None, None, "w"),
}

MODE_THEOREMS = {"klein", "gibbs", "diagonalisation", "subadditivity", "araki_lieb", "ssa"}
DEFAULT_MODE = {"klein": "sandwiched", "gibbs": "sandwiched"}
DEFAULT_TOL = {"purification": 1e-10}


def validate(theorem: str, ensemble: str, dims) -> None:
    if theorem not in SPECS:
        raise ConfigError(f"unknown theorem {theorem!r}; choose from {', '.join(SPECS)}")
    if ensemble not in ENSEMBLES:
        raise ConfigError(f"unknown ensemble {ensemble!r}; choose from {', '.join(ENSEMBLES)}")
    _, _, allowed, factors, _, _ = SPECS[theorem]
    if ensemble not in allowed:
        raise ConfigError(f"ensemble {ensemble!r} is not defined for {theorem}")
    if factors is not None and len(dims) not in factors:
        raise ConfigError(f"{theorem} needs {' or '.join(map(str, factors))} factor(s), got {len(dims)}")


def build(theorem: str, ensemble: str, dims, gen: np.random.Generator, weight_kind: str = "random"):
    validate(theorem, ensemble, dims)
    return SPECS[theorem][0](ensemble, list(dims), gen, weight_kind)


def checker(theorem: str) -> Callable:
    return SPECS[theorem][1]


def override_keys(theorem: str) -> tuple:
    return SPECS[theorem][4], SPECS[theorem][5]
