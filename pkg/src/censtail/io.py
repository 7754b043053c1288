"""Dataset ingestion and JSON run-configuration parsing."""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from .estimators import EstimatorSpec
from .montecarlo import McConfig
from .sampling import CensoringScenario, Seed, matched_censor, model_from_dict
from .survival import CensoredSample

__all__ = ["DataError", "ConfigError", "ingest", "load_run_config", "format_float"]

SCHEMA_VERSION = 1


class DataError(ValueError):
    """Malformed dataset file (bad row, bad value, missing column)."""


class ConfigError(ValueError):
    """Run-configuration JSON violates the published schema."""


def format_float(x: float) -> str:
    """Shortest representation that round-trips exactly."""
    return repr(float(x))


def ingest(path: str, quiet: bool = True) -> CensoredSample:
    """Read a censored dataset from CSV with header columns z,delta[,id].

    Row order is preserved; every problem is reported with its line number.
    With quiet=False a one-line summary (n, censored count and fraction)
    goes to stderr.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        cols = [c.strip().lower() for c in header]
        if cols not in (["z", "delta"], ["z", "delta", "id"], ["id", "z", "delta"]):
            raise DataError(
                f"{path}:1: header must be z,delta with an optional id column, got {header}"
            )
        z_col, d_col = cols.index("z"), cols.index("delta")
        z, delta = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(cols):
                raise DataError(f"{path}:{lineno}: expected {len(cols)} fields, got {len(row)}")
            try:
                zi = float(row[z_col])
            except ValueError:
                raise DataError(f"{path}:{lineno}: z value {row[z_col]!r} is not a number") from None
            if not np.isfinite(zi) or zi <= 0.0:
                raise DataError(f"{path}:{lineno}: z must be finite and > 0, got {row[z_col]}")
            try:
                di = float(row[d_col])
            except ValueError:
                raise DataError(f"{path}:{lineno}: delta value {row[d_col]!r} is not a number") from None
            if di not in (0.0, 1.0):
                raise DataError(f"{path}:{lineno}: delta must be 0 or 1, got {row[d_col]}")
            z.append(zi)
            delta.append(int(di))
    if not z:
        raise DataError(f"{path}: no data rows")
    sample = CensoredSample(np.array(z), np.array(delta))
    if not quiet:
        frac = sample.n_censored / sample.n
        print(
            f"{path}: n={sample.n} censored={sample.n_censored} ({frac:.2%})",
            file=sys.stderr,
        )
    return sample


@dataclass(frozen=True)
class RunConfig:
    """Validated simulate configuration."""

    mc: McConfig


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")


def _require(obj: dict, name: str, where: str):
    if name not in obj:
        raise ConfigError(f"{where}: missing required field {name!r}")
    return obj[name]


def _parse_scenario(obj, where: str = "scenario") -> CensoringScenario:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: must be an object")
    _reject_unknown(obj, {"target", "censor", "p"}, where)
    try:
        target = model_from_dict(_require(obj, "target", where))
    except ValueError as exc:
        raise ConfigError(f"{where}.target: {exc}") from exc
    if "censor" in obj and "p" in obj:
        raise ConfigError(f"{where}: give either 'censor' or 'p', not both")
    if "p" in obj:
        try:
            censor = matched_censor(target, obj["p"])
        except ValueError as exc:
            raise ConfigError(f"{where}.p: {exc}") from exc
    elif obj.get("censor") is not None:
        try:
            censor = model_from_dict(obj["censor"])
        except ValueError as exc:
            raise ConfigError(f"{where}.censor: {exc}") from exc
    else:
        censor = None
    return CensoringScenario(target, censor)


def _parse_estimators(items, n: int) -> tuple:
    if not isinstance(items, list) or not items:
        raise ConfigError("estimators: must be a nonempty array")
    specs = []
    for idx, obj in enumerate(items):
        where = f"estimators[{idx}]"
        if not isinstance(obj, dict):
            raise ConfigError(f"{where}: must be an object")
        _reject_unknown(obj, {"kind", "beta"}, where)
        try:
            specs.append(EstimatorSpec(_require(obj, "kind", where), obj.get("beta")))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    return tuple(specs)


def _parse_k_grid(obj, n: int) -> np.ndarray:
    if obj is None:
        return np.arange(2, n, dtype=np.int64)
    if not isinstance(obj, dict):
        raise ConfigError("k_grid: must be an object")
    _reject_unknown(obj, {"min", "max", "stride", "values"}, "k_grid")
    if "values" in obj:
        if len(obj) != 1:
            raise ConfigError("k_grid: 'values' excludes min/max/stride")
        return np.asarray(obj["values"], dtype=np.int64)
    lo = int(obj.get("min", 2))
    hi = int(obj.get("max", n - 1))
    stride = int(obj.get("stride", 1))
    if stride < 1:
        raise ConfigError(f"k_grid.stride: must be >= 1, got {stride}")
    return np.arange(lo, hi + 1, stride, dtype=np.int64)


def load_run_config(source) -> RunConfig:
    """Parse and validate a simulate configuration (path, file object or dict).

    Unknown fields are rejected; every violation names the offending field.
    """
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        try:
            with open(source) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot open {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be an object")
    _reject_unknown(
        doc,
        {"schema_version", "scenario", "n", "replications", "seed", "estimators", "k_grid"},
        "config",
    )
    version = _require(doc, "schema_version", "config")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    scenario = _parse_scenario(_require(doc, "scenario", "config"))
    n = _require(doc, "n", "config")
    if not isinstance(n, int) or n < 2:
        raise ConfigError(f"n: must be an integer >= 2, got {n!r}")
    reps = _require(doc, "replications", "config")
    if not isinstance(reps, int) or reps < 1:
        raise ConfigError(f"replications: must be an integer >= 1, got {reps!r}")
    seed = _require(doc, "seed", "config")
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed: must be a 64-bit unsigned integer, got {seed!r}")
    estimators = _parse_estimators(_require(doc, "estimators", "config"), n)
    k_grid = _parse_k_grid(doc.get("k_grid"), n)
    try:
        mc = McConfig(scenario, n, reps, estimators, k_grid, Seed(seed))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(mc)
