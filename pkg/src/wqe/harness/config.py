"""Campaign configuration and its stable hash."""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field, replace

from ..inequalities import SLACK_TOL
from .ensembles import DEFAULT_MODE, DEFAULT_TOL, ENSEMBLES, ConfigError, validate

MAX_TOTAL_DIM = 64
WEIGHT_KINDS = ("random", "identity")

DEFAULT_DIMS = {
    "subadditivity": (2, 2), "araki_lieb": (2, 2), "ssa": (2, 2, 2),
}


def parse_dims(text: str) -> tuple[int, ...]:
    """'2x2x3' -> (2, 2, 3)."""
    try:
        dims = tuple(int(p) for p in str(text).lower().split("x"))
    except ValueError:
        raise ConfigError(f"bad --dims {text!r}; expected e.g. 2x2x2") from None
    return dims


def default_dims(theorem: str) -> tuple[int, ...]:
    return DEFAULT_DIMS.get(theorem, (3,))


@dataclass(frozen=True)
class SearchSpec:
    target: str
    max_trials: int = 10_000


@dataclass(frozen=True)
class CampaignConfig:
    theorem: str
    dims: tuple = (3,)
    ensemble: str = "generic"
    samples: int = 100
    seed: int = 0
    mode: str | None = None
    tolerance: float | None = None
    output_path: str | None = None
    search: SearchSpec | None = None
    weight: str = "random"
    candidates: int = 6
    state_path: str | None = None
    weight_path: str | None = None
    workers: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if any(d < 2 for d in self.dims):
            raise ConfigError(f"local dimensions must be >= 2, got {list(self.dims)}")
        if math.prod(self.dims) > MAX_TOTAL_DIM:
            raise ConfigError(f"total dimension {math.prod(self.dims)} exceeds {MAX_TOTAL_DIM}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        if self.mode not in (None, "literal", "sandwiched"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.weight not in WEIGHT_KINDS:
            raise ConfigError(f"unknown weight kind {self.weight!r}")
        if self.tolerance is not None and not self.tolerance >= 0:
            raise ConfigError("tolerance must be non-negative")
        if self.search is None:
            validate(self.theorem, self.ensemble, self.dims)

    @property
    def effective_mode(self) -> str:
        return self.mode or DEFAULT_MODE.get(self.theorem, "literal")

    @property
    def effective_tol(self) -> float:
        if self.tolerance is not None:
            return float(self.tolerance)
        return DEFAULT_TOL.get(self.theorem, SLACK_TOL)

    def with_(self, **changes) -> "CampaignConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("workers")
        out["dims"] = list(self.dims)
        return out

    def hash(self) -> str:
        payload = self.to_dict()
        payload.pop("output_path")
        for key in ("state_path", "weight_path"):
            path = payload.pop(key)
            if path is not None:
                with open(path, "rb") as fh:
                    payload[key + "_sha256"] = hashlib.sha256(fh.read()).hexdigest()
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def worker_count(config: CampaignConfig) -> int:
    if config.workers is not None:
        return max(1, int(config.workers))
    env = os.environ.get("WQE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"WQE_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


__all__ = ["CampaignConfig", "SearchSpec", "ConfigError", "ENSEMBLES", "parse_dims",
           "default_dims", "worker_count", "MAX_TOTAL_DIM"]
