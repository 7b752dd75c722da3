"""Worked qubit examples and the entropy-bound report for a flat weight."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import TraceMode, weighted_entropy, weighted_relative_entropy, weighted_shannon
from .inequalities import check_entropy_bounds
from .states import RngStream, sample_density

DEMO_TOL = 1e-9


@dataclass(frozen=True)
class DemoItem:
    label: str
    computed: float
    expected: float
    provenance: str
    tol: float = DEMO_TOL

    @property
    def ok(self) -> bool:
        return abs(self.computed - self.expected) <= self.tol

    def line(self) -> str:
        mark = "ok " if self.ok else "BAD"
        return (f"[{mark}] {self.label:<56} = {self.computed:.10f}   expected {self.expected:.10f}"
                f"   |diff| {abs(self.computed - self.expected):.1e}   ({self.provenance})")


def _d(*x) -> np.ndarray:
    return np.diag(np.asarray(x, dtype=float)).astype(complex)


def worked_examples() -> list[DemoItem]:
    quarter = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    kl = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    items = [
        DemoItem("S(1/2, 1)", weighted_entropy(np.eye(2) / 2, np.eye(2)).value, math.log(2),
                 "maximally mixed qubit: ln 2"),
        DemoItem("S(diag(1/2,1/2), diag(1,3))", weighted_entropy(_d(.5, .5), _d(1, 3)).value,
                 2 * math.log(2), "(1+3)(1/2)ln 2 = 2 ln 2"),
        DemoItem("S(diag(1/4,3/4), 1)", weighted_entropy(_d(.25, .75), np.eye(2)).value, quarter,
                 "-(1/4 ln 1/4 + 3/4 ln 3/4) = 0.5623351 to 7 digits"),
    ]
    for mode in TraceMode:
        items.append(DemoItem(
            f"D(diag(1/2,1/2) || diag(1/4,3/4), 1) [{mode.value}]",
            weighted_relative_entropy(_d(.5, .5), _d(.25, .75), np.eye(2), mode).value, kl,
            "scalar KL: .5 ln 2 + .5 ln(2/3) = 0.1438410"))
    items.append(DemoItem("h_B(1/2,1/2), B = (2,4)", weighted_shannon([.5, .5], [2, 4]),
                          3 * math.log(2), "(2+4)(1/2)ln 2 = 3 ln 2"))
    return items


@dataclass(frozen=True)
class BoundsReport:
    d: int
    direct: float
    stated: float
    direct_formula: float
    gibbs_values: tuple  # (label, entropy, gibbs bound, satisfied)

    @property
    def ok(self) -> bool:
        return (abs(self.direct - math.log(self.d)) <= DEMO_TOL
                and abs(self.stated - self.d * math.log(self.d)) <= DEMO_TOL
                and all(sat for *_, sat in self.gibbs_values))

    def lines(self) -> list[str]:
        d = self.d
        out = [
            f"upper bound for phi = 1, d = {d} (uniform state P/m with m = {d}):",
            f"  direct S_phi(P/m)            = {self.direct:.10f}   ln {d} = {math.log(d):.10f}",
            f"  (ln m)/m tr(phi)             = {self.direct_formula:.10f}",
            f"  stated bound (ln m) tr(phi)  = {self.stated:.10f}   {d} ln {d} = {d * math.log(d):.10f}",
            f"  discrepancy stated/direct    = {self.stated / self.direct:.6f} (a factor m)",
        ]
        for label, s, g, sat in self.gibbs_values:
            out.append(f"  Gibbs bound (ln m) tr(phi rho) on {label}: S = {s:.10f} <= {g:.10f}  "
                       + ("satisfied" if sat else "VIOLATED"))
        return out


def bounds_report(d: int = 4, seed: int = 0) -> BoundsReport:
    phi = np.eye(d, dtype=complex)
    cases = [("rho = P/m", np.eye(d, dtype=complex) / d),
             (f"random rho (seed {seed})", sample_density(d, rng=RngStream(seed, 0)))]
    gibbs = []
    diag = None
    for label, rho in cases:
        v = check_entropy_bounds(rho, phi)
        diag = v.diagnostics
        gibbs.append((label, v.lhs, v.rhs, v.slack >= -v.tolerance))
    return BoundsReport(d, diag["direct_bound"], diag["stated_bound"], diag["direct_formula"],
                        tuple(gibbs))


def run_demo(print_fn=print) -> bool:
    items = worked_examples()
    print_fn("worked examples (tolerance 1e-9):")
    for it in items:
        print_fn("  " + it.line())
    rep = bounds_report()
    for line in rep.lines():
        print_fn(line)
    ok = all(it.ok for it in items) and rep.ok
    print_fn("demo: " + ("all values reproduced" if ok else "MISMATCH"))
    return ok
