"""Line-delimited result records and the matrix file format.

A result stream is a sequence of JSON lines. Each campaign starts with a
header line ``{"schema": "wqe-results", "schema_version": 1, ...}`` followed
by one record per instance, so streams from several campaigns can simply be
concatenated.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from typing import Any

import numpy as np

from .. import __version__
from ..inequalities import Verdict
from .ensembles import ConfigError

SCHEMA = "wqe-results"
SCHEMA_VERSION = 1

RECORD_KEYS = ("theorem", "seed", "index", "mode", "conditions", "lhs", "rhs", "slack",
               "imag_residue", "pass", "vacuous", "tol", "config_hash")
# Excluded when comparing streams for reproducibility.
VOLATILE_KEYS = ("timestamp",)


class RecordError(ValueError):
    pass


def _plain(x: Any):
    """Recursively convert numpy scalars/arrays into JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def header(config, config_hash: str) -> dict:
    return {"schema": SCHEMA, "schema_version": SCHEMA_VERSION, "version": __version__,
            "config_hash": config_hash, "config": _plain(config.to_dict())}


def now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="microseconds")


def verdict_record(v: Verdict, seed: int, index: int, config_hash: str) -> dict:
    return {
        "theorem": v.theorem, "seed": int(seed), "index": int(index), "mode": v.mode,
        "status": v.status,
        "conditions": {k: {"value": float(c.value), "ok": bool(c.ok)} for k, c in v.conditions.items()},
        "lhs": v.lhs, "rhs": v.rhs, "slack": v.slack,
        "imag_residue": v.imag_residue, "imag_residues": _plain(v.imag_residues),
        "assertions": _plain(v.assertions),
        "pass": bool(v.passed and not v.vacuous), "vacuous": bool(v.vacuous),
        "tol": v.tolerance, "config_hash": config_hash,
        "timestamp": now(), "version": __version__,
        "diagnostics": _plain(v.diagnostics),
    }


def error_record(theorem: str, mode, seed: int, index: int, tol: float, config_hash: str,
                 exc: BaseException) -> dict:
    """Stand-in record for an instance whose evaluation raised; counts as a failure."""
    nan = math.nan
    return {
        "theorem": theorem, "seed": int(seed), "index": int(index), "mode": mode,
        "status": "error", "conditions": {}, "lhs": nan, "rhs": nan, "slack": nan,
        "imag_residue": 0.0, "imag_residues": {}, "assertions": {},
        "pass": False, "vacuous": False, "tol": tol, "config_hash": config_hash,
        "timestamp": now(), "version": __version__,
        "diagnostics": {}, "error": f"{type(exc).__name__}: {exc}",
    }


def dumps(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"), allow_nan=True)


def loads(line: str) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"not valid JSON: {exc.msg}") from None
    if not isinstance(rec, dict):
        raise RecordError("line is not an object")
    if "schema" in rec:
        if rec.get("schema") != SCHEMA or rec.get("schema_version") != SCHEMA_VERSION:
            raise RecordError(f"unsupported schema {rec.get('schema')!r} v{rec.get('schema_version')!r}")
        return rec
    missing = [k for k in RECORD_KEYS if k not in rec]
    if missing:
        raise RecordError(f"record lacks keys {missing}")
    return rec


def is_header(rec: dict) -> bool:
    return "schema" in rec


def stable(record: dict) -> dict:
    return {k: v for k, v in record.items() if k not in VOLATILE_KEYS}


# --------------------------------------------------------------------------- #
#                               matrix files                                  #
# --------------------------------------------------------------------------- #

def _grid(name: str, rows) -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"matrix field {name!r} must be a list of rows")
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise ConfigError(f"matrix field {name!r} is ragged")
    try:
        return np.array(rows, dtype=float).reshape(len(rows), lengths.pop() if lengths else 0)
    except (TypeError, ValueError):
        raise ConfigError(f"matrix field {name!r} has non-numeric entries") from None


def parse_matrix(doc: dict) -> tuple[list[int], np.ndarray]:
    if not isinstance(doc, dict) or not {"dims", "re"} <= doc.keys():
        raise ConfigError("matrix document needs 'dims' and 're' (and optionally 'im')")
    dims = doc["dims"]
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)):
        raise ConfigError(f"'dims' must be a non-empty list of positive integers, got {dims!r}")
    re = _grid("re", doc["re"])
    im = _grid("im", doc["im"]) if doc.get("im") is not None else np.zeros_like(re)
    if re.ndim != 2 or re.shape[0] != re.shape[1]:
        raise ConfigError(f"matrix is not square: {re.shape}")
    if im.shape != re.shape:
        raise ConfigError(f"'re' is {re.shape} but 'im' is {im.shape}")
    if math.prod(dims) != re.shape[0]:
        raise ConfigError(f"dims {dims} imply size {math.prod(dims)}, matrix is {re.shape[0]}")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ConfigError("matrix has non-finite entries")
    return list(dims), re + 1j * im


def read_matrix(path: str) -> tuple[list[int], np.ndarray]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc.msg})") from None
    return parse_matrix(doc)


def matrix_document(m, dims=None) -> dict:
    m = np.asarray(m, dtype=complex)
    dims = [m.shape[0]] if dims is None else [int(d) for d in dims]
    return {"dims": dims, "re": m.real.tolist(), "im": m.imag.tolist()}


def write_matrix(path: str, m, dims=None) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_document(m, dims), fh, indent=1)
        fh.write("\n")
