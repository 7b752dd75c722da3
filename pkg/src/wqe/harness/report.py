"""Summaries of result streams."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import records


@dataclass
class TheoremStats:
    theorem: str
    total: int = 0
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    errors: int = 0
    max_imag_residue: float = 0.0
    slacks: list = field(default_factory=list, repr=False)
    condition_ok: dict = field(default_factory=dict)
    condition_seen: dict = field(default_factory=dict)

    def add(self, rec: dict) -> None:
        # Validate everything before mutating, so a malformed line leaves no trace.
        status = rec.get("status") or ("vacuous" if rec["vacuous"] else "pass" if rec["pass"] else "fail")
        if status not in ("pass", "fail", "vacuous", "error"):
            raise ValueError(f"unknown status {status!r}")
        slack = float(rec["slack"])
        residue = float(rec["imag_residue"])
        conds = {str(k): bool(c["ok"]) for k, c in rec["conditions"].items()}
        self.total += 1
        if status == "error":
            self.errors += 1
            self.failed += 1
        elif status == "vacuous":
            self.vacuous += 1
        elif status == "pass":
            self.passed += 1
        else:
            self.failed += 1
        if status in ("pass", "fail") and not math.isnan(slack):
            self.slacks.append(slack)
        self.max_imag_residue = max(self.max_imag_residue, residue)
        for name, ok in conds.items():
            self.condition_seen[name] = self.condition_seen.get(name, 0) + 1
            self.condition_ok[name] = self.condition_ok.get(name, 0) + ok

    def slack_stats(self) -> dict:
        if not self.slacks:
            return {"min": None, "p1": None, "median": None}
        s = np.asarray(self.slacks)
        return {"min": float(s.min()), "p1": float(np.percentile(s, 1)),
                "median": float(np.median(s))}

    def to_dict(self) -> dict:
        return {"total": self.total, "pass": self.passed, "fail": self.failed,
                "vacuous": self.vacuous, "errors": self.errors,
                "slack": self.slack_stats(), "max_imag_residue": self.max_imag_residue,
                "condition_rates": {k: self.condition_ok[k] / self.condition_seen[k]
                                    for k in self.condition_seen}}


@dataclass
class Report:
    theorems: dict
    records: int
    headers: int
    malformed: list  # (line number, message)

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.theorems.values())

    @property
    def exit_code(self) -> int:
        return 1 if self.failures or self.malformed else 0

    def to_dict(self) -> dict:
        return {"records": self.records, "headers": self.headers,
                "malformed": [{"line": n, "error": m} for n, m in self.malformed],
                "theorems": {k: t.to_dict() for k, t in self.theorems.items()},
                "exit_code": self.exit_code}

    def text(self) -> str:
        lines = [f"{self.records} record(s), {self.headers} campaign header(s), "
                 f"{len(self.malformed)} malformed line(s)"]
        for name, t in sorted(self.theorems.items()):
            s = t.slack_stats()
            fmt = lambda x: "n/a" if x is None else f"{x:.3e}"  # noqa: E731
            lines.append(f"{name}: pass={t.passed} fail={t.failed} vacuous={t.vacuous}"
                         + (f" (errors={t.errors})" if t.errors else ""))
            lines.append(f"  slack min={fmt(s['min'])} p1={fmt(s['p1'])} median={fmt(s['median'])}"
                         f"  max imag residue={t.max_imag_residue:.3e}")
            rates = t.to_dict()["condition_rates"]
            if rates:
                lines.append("  conditions: " + ", ".join(f"{k} {v:.1%}" for k, v in sorted(rates.items())))
        for n, msg in self.malformed:
            lines.append(f"line {n}: {msg}")
        lines.append("status: " + ("FAIL" if self.exit_code else "OK"))
        return "\n".join(lines)


def summarize_lines(lines) -> Report:
    report = Report({}, 0, 0, [])
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = records.loads(line)
            if records.is_header(rec):
                report.headers += 1
                continue
            stats = report.theorems.get(rec["theorem"]) or TheoremStats(rec["theorem"])
            stats.add(rec)
        except (records.RecordError, KeyError, TypeError, ValueError, AttributeError) as exc:
            report.malformed.append((n, str(exc)))
            continue
        report.theorems[rec["theorem"]] = stats
        report.records += 1
    return report


def summarize(path: str) -> Report:
    """Read a JSONL result stream; unreadable lines are listed with their numbers."""
    with open(path, encoding="utf-8") as fh:
        return summarize_lines(fh)
