"""Seeded Monte-Carlo campaigns.

Instance ``i`` of a campaign is generated from ``RngStream(seed, i)`` alone,
so a record depends only on the configuration and its index. Workers
evaluate instances out of process; the parent owns the output stream and
writes records in index order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..states import RngStream
from . import ensembles, records
from .config import CampaignConfig, ConfigError, worker_count


class CampaignError(OSError):
    pass


class InstanceRunner:
    """Picklable evaluator: config plus any override matrices, loaded once."""

    def __init__(self, config: CampaignConfig):
        self.config = config
        self.config_hash = config.hash()
        self.overrides = self._load_overrides(config)

    @staticmethod
    def _load_overrides(config) -> dict:
        state_key, weight_key = ensembles.override_keys(config.theorem)
        out = {}
        for path, key, what in ((config.state_path, state_key, "state"),
                                (config.weight_path, weight_key, "weight")):
            if path is None:
                continue
            if key is None:
                raise ConfigError(f"{config.theorem} does not accept a {what} override")
            dims, m = records.read_matrix(path)
            if math.prod(dims) != math.prod(config.dims):
                raise ConfigError(f"{what} file dims {dims} do not match --dims {list(config.dims)}")
            if len(dims) > 1 and tuple(dims) != config.dims:
                raise ConfigError(f"{what} file factor dims {dims} differ from {list(config.dims)}")
            out[key] = m
        return out

    def kwargs(self, gen: np.random.Generator) -> dict:
        cfg = self.config
        kw = ensembles.build(cfg.theorem, cfg.ensemble, cfg.dims, gen, cfg.weight)
        kw.update(self.overrides)
        kw["tol"] = cfg.effective_tol
        if cfg.theorem in ensembles.MODE_THEOREMS:
            kw["mode"] = cfg.effective_mode
        if cfg.theorem == "araki_lieb":
            kw["candidates"] = cfg.candidates
        return kw

    def verdict(self, index: int):
        gen = RngStream(self.config.seed, index).generator()
        v = ensembles.checker(self.config.theorem)(**self.kwargs(gen))
        return v.with_seed(self.config.seed, index)

    def __call__(self, index: int) -> dict:
        cfg = self.config
        try:
            return records.verdict_record(self.verdict(index), cfg.seed, index, self.config_hash)
        except Exception as exc:  # a bad instance must not abort the campaign
            mode = cfg.effective_mode if cfg.theorem in ensembles.MODE_THEOREMS else None
            return records.error_record(cfg.theorem, mode, cfg.seed, index, cfg.effective_tol,
                                        self.config_hash, exc)


@dataclass
class CampaignSummary:
    theorem: str
    samples: int = 0
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    errors: int = 0
    min_slack: float = math.inf
    max_imag_residue: float = 0.0
    condition_rates: dict = field(default_factory=dict)
    wall_time: float = 0.0
    config_hash: str = ""
    output_path: str | None = None
    _cond_ok: dict = field(default_factory=dict, repr=False)

    def add(self, rec: dict) -> None:
        self.samples += 1
        status = rec.get("status") or ("vacuous" if rec["vacuous"] else "pass" if rec["pass"] else "fail")
        if status == "error":
            self.errors += 1
            self.failed += 1
        elif status == "vacuous":
            self.vacuous += 1
        elif status == "pass":
            self.passed += 1
        else:
            self.failed += 1
        if status in ("pass", "fail") and not math.isnan(rec["slack"]):
            self.min_slack = min(self.min_slack, rec["slack"])
        self.max_imag_residue = max(self.max_imag_residue, rec["imag_residue"])
        for name, c in rec["conditions"].items():
            self._cond_ok[name] = self._cond_ok.get(name, 0) + bool(c["ok"])
        self.condition_rates = {k: v / self.samples for k, v in self._cond_ok.items()}

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem, "samples": self.samples, "pass": self.passed,
            "fail": self.failed, "vacuous": self.vacuous, "errors": self.errors,
            "min_slack": None if math.isinf(self.min_slack) else self.min_slack,
            "max_imag_residue": self.max_imag_residue,
            "condition_rates": dict(self.condition_rates), "wall_time": self.wall_time,
            "config_hash": self.config_hash, "output_path": self.output_path,
        }


def iter_records(config: CampaignConfig, runner: InstanceRunner | None = None):
    """Yield records for indices 0..samples-1 in order, using the worker pool."""
    runner = runner or InstanceRunner(config)
    n, workers = config.samples, min(worker_count(config), config.samples)
    if workers == 1:
        for i in range(n):
            yield runner(i)
        return
    chunk = max(1, min(64, n // (4 * workers)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(runner, range(n), chunksize=chunk)


def _open_output(path):
    if path is None:
        return None
    try:
        return open(path, "a", encoding="utf-8")
    except OSError as exc:
        raise CampaignError(f"cannot write {path}: {exc.strerror}") from None


def run_campaign(config: CampaignConfig, collect: list | None = None) -> CampaignSummary:
    """Evaluate ``config.samples`` instances and append their records to ``output_path``.

    ``collect``, when given, receives every record as well.
    """
    runner = InstanceRunner(config)
    out = _open_output(config.output_path)
    summary = CampaignSummary(config.theorem, config_hash=runner.config_hash,
                              output_path=config.output_path)
    t0 = time.perf_counter()
    try:
        if out is not None:
            out.write(records.dumps(records.header(config, runner.config_hash)) + "\n")
        for rec in iter_records(config, runner):
            summary.add(rec)
            if out is not None:
                out.write(records.dumps(rec) + "\n")
            if collect is not None:
                collect.append(rec)
    finally:
        if out is not None:
            out.close()
    summary.wall_time = time.perf_counter() - t0
    return summary
