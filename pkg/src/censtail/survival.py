"""Kaplan-Meier and Nelson-Aalen survival estimation for censored samples.

Curves are held as cumulative log-survival sums, and the tail ratios consumed
by the tail-index estimators are exponentials of differences of those sums, so
no small survival probabilities are ever divided.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "CensoredSample",
    "RankedSample",
    "SurvivalCurve",
    "rank",
    "km_curve",
    "na_curve",
    "tail_ratio",
    "km_na_divergence",
]


def _as_sample_arrays(z, delta):
    z = np.asarray(z, dtype=float)
    delta = np.asarray(delta)
    if z.ndim != 1 or delta.ndim != 1:
        raise ValueError("z and delta must be one-dimensional")
    if z.shape[0] != delta.shape[0]:
        raise ValueError(
            f"z and delta must have equal length, got {z.shape[0]} and {delta.shape[0]}"
        )
    if z.shape[0] == 0:
        raise ValueError("sample must be nonempty")
    if not np.all(np.isfinite(z)) or np.any(z <= 0.0):
        raise ValueError("all observed values z must be finite and > 0")
    d = delta.astype(np.int64)
    if np.any(d != delta) or not np.all((d == 0) | (d == 1)):
        raise ValueError("censoring indicators delta must be 0 or 1")
    z = z.copy()
    z.flags.writeable = False
    d.flags.writeable = False
    return z, d


@dataclass(frozen=True)
class CensoredSample:
    """Observed minima z = min(x, c) with indicators delta = 1{x <= c}."""

    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        z, d = _as_sample_arrays(self.z, self.delta)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "delta", d)

    @property
    def n(self) -> int:
        return int(self.z.shape[0])

    @property
    def n_censored(self) -> int:
        return int(self.n - self.delta.sum())


class RankedSample:
    """Order statistics Z_{1:n} <= ... <= Z_{n:n} with concomitant indicators.

    Instances are immutable; derived arrays used throughout the estimators
    (logs of the top order statistics, cumulative indicator sums) are cached.
    """

    def __init__(self, z_sorted: np.ndarray, delta_concomitant: np.ndarray):
        z, d = _as_sample_arrays(z_sorted, delta_concomitant)
        if np.any(np.diff(z) < 0.0):
            raise ValueError("z_sorted must be nondecreasing")
        self.z_sorted = z
        self.delta_concomitant = d
        self.n = int(z.shape[0])

    @cached_property
    def log_z(self) -> np.ndarray:
        return np.log(self.z_sorted)

    @cached_property
    def top_log(self) -> np.ndarray:
        """log Z_{n-i+1:n} at index i-1 (descending order)."""
        return self.log_z[::-1]

    @cached_property
    def top_delta(self) -> np.ndarray:
        """delta_[n-i+1:n] at index i-1 (descending order)."""
        return self.delta_concomitant[::-1]

    @cached_property
    def top_delta_cum(self) -> np.ndarray:
        """Number of uncensored among the top i observations, at index i-1."""
        return np.cumsum(self.top_delta)

    @cached_property
    def top_log_cum(self) -> np.ndarray:
        return np.cumsum(self.top_log)

    @cached_property
    def km(self) -> "SurvivalCurve":
        return _build_curve(self, "km")

    @cached_property
    def na(self) -> "SurvivalCurve":
        return _build_curve(self, "na")

    def curve(self, kind: str) -> "SurvivalCurve":
        if kind == "km":
            return self.km
        if kind == "na":
            return self.na
        raise ValueError(f"unknown curve kind {kind!r}; expected 'km' or 'na'")


def rank(sample: CensoredSample) -> RankedSample:
    """Stable sort by z; ties keep original sample order, concomitants follow."""
    order = np.argsort(sample.z, kind="stable")
    return RankedSample(sample.z[order], sample.delta[order])


class SurvivalCurve:
    """Step-function estimate of the survival function at the order statistics.

    ``log_survival[m-1]`` holds log F_bar(Z_{m:n}); the KM variant reaches
    -inf at Z_{n:n} when the largest observation is uncensored.
    """

    def __init__(self, kind: str, support: np.ndarray, log_survival: np.ndarray):
        self.kind = kind
        self.support = support
        self.log_survival = log_survival
        self.n = int(support.shape[0])
        log_survival.flags.writeable = False

    @cached_property
    def values(self) -> np.ndarray:
        return np.exp(self.log_survival)

    @cached_property
    def _rev_log(self) -> np.ndarray:
        """Index t holds log F_bar(Z_{n-t:n}); t=0 is the largest observation."""
        return self.log_survival[::-1]

    def log_tail_ratios(self, k: int, include_start: bool = False) -> np.ndarray:
        """log survival ratios against F_bar(Z_{n-k:n}) for i = 1..k.

        With include_start=True the numerator is the curve value at
        Z_{n-i+1:n} itself, so under KM the i=1 entry is -inf whenever the
        sample maximum is uncensored.  With include_start=False it is the
        value just below that observation (the product over positions
        i+1..k), which is finite for every i >= 1 and zero at i = k.
        """
        if not 1 <= k <= self.n - 1:
            raise ValueError(f"k must lie in [1, n-1] = [1, {self.n - 1}], got {k}")
        rev = self._rev_log
        if include_start:
            return rev[:k] - rev[k]
        return rev[1 : k + 1] - rev[k]


def _build_curve(ranked: RankedSample, kind: str) -> SurvivalCurve:
    n = ranked.n
    at_risk = np.arange(n, 0, -1, dtype=float)  # n - r + 1 for rank r = 1..n
    if kind == "na":
        steps = -ranked.delta_concomitant / at_risk
    else:
        with np.errstate(divide="ignore"):  # log(0) = -inf at the last rank
            lg = np.log1p(-1.0 / at_risk)
        steps = np.where(ranked.delta_concomitant == 1, lg, 0.0)
    return SurvivalCurve(kind, ranked.z_sorted, np.cumsum(steps))


def km_curve(ranked: RankedSample) -> SurvivalCurve:
    """Kaplan-Meier product-limit survival curve."""
    return ranked.km


def na_curve(ranked: RankedSample) -> SurvivalCurve:
    """Nelson-Aalen (exponentiated cumulative hazard) survival curve."""
    return ranked.na


def tail_ratio(curve: SurvivalCurve, i: int, k: int, include_start: bool = False) -> float:
    """Survival ratio between the i-th and k-th top order statistics.

    By default this is the product over positions i+1..k of the per-step
    survival factors (1 at i == k, in (0, 1] throughout).  With
    include_start=True the i-th step's own factor joins the product, giving
    the curve-value ratio F_bar(Z_{n-i+1:n}) / F_bar(Z_{n-k:n}); that form
    is 0 under KM at i=1 when the sample maximum is uncensored, which is
    valid (every estimator term then carries a vanishing weight).
    """
    n = curve.n
    if not 1 <= i <= k <= n - 1:
        raise ValueError(
            f"indices must satisfy 1 <= i <= k <= n-1 = {n - 1}, got i={i}, k={k}"
        )
    rev = curve._rev_log
    lo = i - 1 if include_start else i
    return float(np.exp(rev[lo] - rev[k]))


def km_na_divergence(ranked: RankedSample, upper_fraction: float = 0.9) -> float:
    """Largest relative KM/NA discrepancy over the bulk of the sample.

    Returns sup |KM(Z_{i:n}) / NA(Z_{i:n}) - 1| over i < n with at least a
    (1 - upper_fraction) share of the sample still at risk.  The ratio is
    exact near the sample maximum only in the trivial all-censored case, and
    degrades to a constant there otherwise, so the top slice is excluded;
    within the retained range the discrepancy shrinks like 1/n.
    """
    if not 0.0 < upper_fraction <= 1.0:
        raise ValueError("upper_fraction must lie in (0, 1]")
    n = ranked.n
    i_max = min(n - 1, int(np.ceil(upper_fraction * n)))
    if i_max < 1:
        return 0.0
    diff = ranked.km.log_survival[:i_max] - ranked.na.log_survival[:i_max]
    return float(np.max(np.abs(np.expm1(diff))))
