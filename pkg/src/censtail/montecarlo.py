"""Replication engine: per-k bias and MSE of estimator sets over many samples.

Replications are split into fixed-size chunks whose partial moments are merged
in chunk order, so results are byte-identical whatever the worker count; each
replication draws its sample from a child seed that depends only on the master
seed and the replication index.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .estimators import EstimatorSpec, evaluate_grid
from .sampling import CensoringScenario, Seed, generate
from .survival import rank

__all__ = ["McConfig", "McSummary", "run", "figure_table", "format_table", "parse_table"]

_CHUNK = 25  # replications per work unit; fixed so merges never depend on workers

TABLE_COLUMNS = ("k", "estimator_id", "beta", "abs_bias", "mse", "failures")


@dataclass(frozen=True)
class McConfig:
    scenario: CensoringScenario
    n: int
    replications: int
    estimators: tuple
    k_grid: np.ndarray
    seed: Seed

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"sample size must be >= 2, got {self.n}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        ests = tuple(self.estimators)
        if not ests or not all(isinstance(e, EstimatorSpec) for e in ests):
            raise ValueError("estimators must be a nonempty sequence of EstimatorSpec")
        grid = np.asarray(self.k_grid, dtype=np.int64)
        if grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("k_grid must be nonempty and strictly increasing")
        if grid[0] < 1 or grid[-1] > self.n - 1:
            raise ValueError(f"k_grid must stay within [1, n-1] = [1, {self.n - 1}]")
        grid.flags.writeable = False
        object.__setattr__(self, "estimators", ests)
        object.__setattr__(self, "k_grid", grid)


@dataclass
class McSummary:
    """Per (estimator, k) moments over the successful replications.

    mean/variance are the sample mean and population variance of the
    estimates, mse the mean of (estimate - gamma1)^2; failures counts the
    replications where the estimator was undefined at that k.
    """

    gamma1: float
    estimators: tuple
    k_grid: np.ndarray
    count: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    mse: np.ndarray
    failures: np.ndarray
    replications: int

    @property
    def abs_bias(self) -> np.ndarray:
        return np.abs(self.mean - self.gamma1)

    def __eq__(self, other):
        if not isinstance(other, McSummary):
            return NotImplemented
        return (
            self.gamma1 == other.gamma1
            and self.estimators == other.estimators
            and np.array_equal(self.k_grid, other.k_grid)
            and np.array_equal(self.count, other.count)
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.variance, other.variance)
            and np.array_equal(self.mse, other.mse)
            and np.array_equal(self.failures, other.failures)
            and self.replications == other.replications
        )


class _Accumulator:
    """Streaming mean/M2 of the estimates plus mean of (x - gamma1)^2."""

    def __init__(self, n_est: int, n_k: int, gamma1: float):
        self.gamma1 = gamma1
        self.count = np.zeros((n_est, n_k), dtype=np.int64)
        self.mean = np.zeros((n_est, n_k))
        self.m2 = np.zeros((n_est, n_k))
        self.mse_mean = np.zeros((n_est, n_k))
        self.failures = np.zeros((n_est, n_k), dtype=np.int64)

    def add(self, e: int, values: np.ndarray, ok: np.ndarray) -> None:
        self.failures[e] += ~ok
        if not np.any(ok):
            return
        cnt = self.count[e]
        mean = self.mean[e]
        x = np.where(ok, values, mean)  # no-ops for failed cells
        new_cnt = cnt + ok
        safe = np.maximum(new_cnt, 1)
        delta = x - mean
        mean += np.where(ok, delta / safe, 0.0)
        self.m2[e] += np.where(ok, delta * (x - mean), 0.0)
        sq = np.where(ok, (values - self.gamma1) ** 2, 0.0)
        self.mse_mean[e] += np.where(ok, (sq - self.mse_mean[e]) / safe, 0.0)
        self.count[e] = new_cnt

    def merge(self, other: "_Accumulator") -> None:
        na, nb = self.count, other.count
        nab = na + nb
        safe = np.maximum(nab, 1)
        delta = other.mean - self.mean
        self.mean = np.where(nab > 0, self.mean + delta * nb / safe, 0.0)
        self.m2 = self.m2 + other.m2 + delta * delta * na * nb / safe
        self.mse_mean = np.where(
            nab > 0, (na * self.mse_mean + nb * other.mse_mean) / safe, 0.0
        )
        self.count = nab
        self.failures = self.failures + other.failures


def _run_chunk(config: McConfig, r_lo: int, r_hi: int) -> _Accumulator:
    acc = _Accumulator(len(config.estimators), config.k_grid.size, config.scenario.gamma1)
    for r in range(r_lo, r_hi):
        sample = generate(config.scenario, config.n, config.seed.child(r))
        ranked = rank(sample)
        for e, spec in enumerate(config.estimators):
            values, ok, _ = evaluate_grid(ranked, spec, config.k_grid)
            acc.add(e, values, ok)
    return acc


def resolve_workers(requested: int | None = None) -> int:
    """Requested worker count (default: CPU count), capped by CENSTAIL_THREADS."""
    w = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get("CENSTAIL_THREADS")
    if cap is not None:
        w = min(w, max(1, int(cap)))
    return max(1, int(w))


def run(config: McConfig, workers: int | None = None) -> McSummary:
    """Execute all replications and aggregate per-cell moments.

    Deterministic for a given master seed: chunk boundaries and the merge
    order are fixed, so single- and multi-worker runs agree byte for byte.
    """
    workers = resolve_workers(workers)
    r_total = config.replications
    bounds = [(lo, min(lo + _CHUNK, r_total)) for lo in range(0, r_total, _CHUNK)]
    if workers == 1 or len(bounds) == 1:
        parts = [_run_chunk(config, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, config, lo, hi) for lo, hi in bounds]
            parts = [f.result() for f in futures]
    total = parts[0]
    for part in parts[1:]:
        total.merge(part)
    cnt = np.maximum(total.count, 1)
    return McSummary(
        gamma1=config.scenario.gamma1,
        estimators=config.estimators,
        k_grid=config.k_grid,
        count=total.count,
        mean=total.mean,
        variance=total.m2 / cnt,
        mse=total.mse_mean,
        failures=total.failures,
        replications=r_total,
    )


def figure_table(summary: McSummary) -> list:
    """One row per (k, estimator): [k, estimator_id, beta, abs_bias, mse, failures].

    Rows are sorted by (estimator_id, beta, k); cells with no successful
    replication emit empty bias/mse fields.
    """
    order = sorted(
        range(len(summary.estimators)),
        key=lambda e: (summary.estimators[e].kind, summary.estimators[e].beta or 0.0),
    )
    bias = summary.abs_bias
    rows = []
    for e in order:
        spec = summary.estimators[e]
        for j, k in enumerate(summary.k_grid):
            got = summary.count[e, j] > 0
            rows.append(
                (
                    int(k),
                    spec.kind,
                    spec.beta,
                    float(bias[e, j]) if got else None,
                    float(summary.mse[e, j]) if got else None,
                    int(summary.failures[e, j]),
                )
            )
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def format_table(rows) -> str:
    """Render figure_table rows as CSV with shortest round-trip floats."""
    lines = [",".join(TABLE_COLUMNS)]
    for k, est, beta, bias, mse, fails in rows:
        lines.append(f"{k},{est},{_fmt(beta)},{_fmt(bias)},{_fmt(mse)},{fails}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list:
    """Inverse of format_table; round-trips exactly."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != ",".join(TABLE_COLUMNS):
        raise ValueError("missing or unexpected header line")
    rows = []
    for ln in lines[1:]:
        k, est, beta, bias, mse, fails = ln.split(",")
        rows.append(
            (
                int(k),
                est,
                float(beta) if beta else None,
                float(bias) if bias else None,
                float(mse) if mse else None,
                int(fails),
            )
        )
    return rows
