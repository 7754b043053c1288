"""Tail-index estimators for right-censored Pareto-type data.

All estimators consume the top k order statistics of the ranked sample.  The
weighted family raises the Kaplan-Meier or Nelson-Aalen survival ratios,
evaluated at each order statistic, to the power beta/p_hat_k; with beta equal
to p_hat_k the Kaplan-Meier variant coincides exactly with the classical
KM-integral estimator, and the Nelson-Aalen one with its cumulative-hazard
counterpart.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .survival import RankedSample

__all__ = [
    "AllCensoredTailError",
    "DegenerateEstimateError",
    "BetaRangeWarning",
    "EstimatorSpec",
    "EstimatePath",
    "ESTIMATOR_KINDS",
    "hill",
    "p_hat",
    "efg",
    "worms_km",
    "mns_na",
    "weighted_na",
    "weighted_km",
    "box_cox",
    "bw",
    "evaluate",
    "evaluate_grid",
    "path",
]


class AllCensoredTailError(ValueError):
    """Every one of the top k observations is censored (p_hat_k = 0)."""


class DegenerateEstimateError(ArithmeticError):
    """The estimator hit a pole (division by zero) for this sample and k."""


class BetaRangeWarning(UserWarning):
    """beta <= 1: the weighted estimators then require weak censoring (p > 1/2)."""


# Reason codes attached to failed path entries.
REASON_ALL_CENSORED = "all-censored-tail"
REASON_DEGENERATE = "degenerate"

ESTIMATOR_KINDS = (
    "hill",
    "p-hat",
    "efg",
    "worms-km",
    "mns-na",
    "weighted-na",
    "weighted-km",
    "bw",
)

_BETA_KINDS = ("weighted-na", "weighted-km", "bw")


def _check_beta(kind: str, beta: float) -> float:
    beta = float(beta)
    if not np.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    if kind in ("weighted-na", "weighted-km"):
        if beta <= 0.0:
            raise ValueError(f"beta must be > 0 for {kind}, got {beta}")
        if beta <= 1.0:
            warnings.warn(
                f"beta = {beta} <= 1: {kind} is only guaranteed to work under "
                "weak censoring (p > 1/2)",
                BetaRangeWarning,
                stacklevel=3,
            )
    return beta


@dataclass(frozen=True)
class EstimatorSpec:
    """An estimator kind plus, where applicable, its tuning parameter beta."""

    kind: str
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in ESTIMATOR_KINDS:
            raise ValueError(
                f"unknown estimator kind {self.kind!r}; expected one of {ESTIMATOR_KINDS}"
            )
        if self.kind in _BETA_KINDS:
            if self.beta is None:
                raise ValueError(f"estimator {self.kind!r} requires beta")
            object.__setattr__(self, "beta", _check_beta(self.kind, self.beta))
        elif self.beta is not None:
            raise ValueError(f"estimator {self.kind!r} does not take beta")

    @property
    def min_k(self) -> int:
        return 2 if self.kind == "bw" else 1

    def max_k(self, n: int) -> int:
        # p_hat needs no threshold observation, so it extends to k = n
        return n if self.kind == "p-hat" else n - 1

    def label(self) -> str:
        if self.beta is None:
            return self.kind
        return f"{self.kind}({self.beta:g})"


@dataclass(frozen=True)
class EstimatePath:
    """Estimator values as a function of k; failed k's carry reason codes."""

    estimator: EstimatorSpec
    k_values: np.ndarray
    estimates: np.ndarray
    failures: tuple = ()

    def __post_init__(self):
        k = np.asarray(self.k_values, dtype=np.int64)
        est = np.asarray(self.estimates, dtype=float)
        if k.shape != est.shape:
            raise ValueError("k_values and estimates must have equal length")
        if k.size and np.any(np.diff(k) <= 0):
            raise ValueError("k_values must be strictly increasing")
        if np.any(np.isnan(est)):
            raise ValueError("estimates must be NaN-free; failed k's go to failures")
        object.__setattr__(self, "k_values", k)
        object.__setattr__(self, "estimates", est)
        object.__setattr__(self, "failures", tuple(self.failures))


def _check_k(ranked: RankedSample, k: int, k_min: int = 1, k_cap_offset: int = 1) -> int:
    k = int(k)
    hi = ranked.n - k_cap_offset
    if not k_min <= k <= hi:
        raise ValueError(f"k must lie in [{k_min}, {hi}] for n={ranked.n}, got {k}")
    return k


def hill(ranked: RankedSample, k: int) -> float:
    """Hill estimator: mean log-excess of the top k observations over Z_{n-k:n}."""
    k = _check_k(ranked, k)
    return float(ranked.top_log_cum[k - 1] / k - ranked.top_log[k])


def p_hat(ranked: RankedSample, k: int) -> float:
    """Fraction of uncensored observations among the top k."""
    k = int(k)
    if not 1 <= k <= ranked.n:
        raise ValueError(f"k must lie in [1, {ranked.n}], got {k}")
    return float(ranked.top_delta_cum[k - 1] / k)


def efg(ranked: RankedSample, k: int) -> float:
    """Censoring-adapted Hill estimator: hill(k) / p_hat(k)."""
    k = _check_k(ranked, k)
    p = p_hat(ranked, k)
    if p == 0.0:
        raise AllCensoredTailError(f"all of the top {k} observations are censored")
    return hill(ranked, k) / p


def _ratio_weighted_sum(ranked: RankedSample, curve_kind: str, k: int, a: float) -> float:
    """sum over i<=k of (delta_i / i) * ratio(i, k)^a * log(Z_{n-i+1}/Z_{n-k}).

    ratio(i, k) is the survival-curve value AT Z_{n-i+1:n} over the value at
    Z_{n-k:n} (include_start form).  Under KM the i=1 weight is 0 whenever
    the sample maximum is uncensored: 0^positive times a finite log is 0.
    """
    logr = ranked.curve(curve_kind).log_tail_ratios(k, include_start=True)
    i = np.arange(1.0, k + 1.0)
    w = ranked.top_delta[:k] / i
    lz = ranked.top_log[:k] - ranked.top_log[k]
    return float(np.sum(w * np.exp(a * logr) * lz))


def worms_km(ranked: RankedSample, k: int) -> float:
    """Kaplan-Meier integral estimator (tail ratios entering with exponent 1)."""
    k = _check_k(ranked, k)
    return _ratio_weighted_sum(ranked, "km", k, 1.0)


def mns_na(ranked: RankedSample, k: int) -> float:
    """Nelson-Aalen integral estimator (tail ratios entering with exponent 1)."""
    k = _check_k(ranked, k)
    return _ratio_weighted_sum(ranked, "na", k, 1.0)


def _weighted(ranked: RankedSample, curve_kind: str, k: int, beta: float) -> float:
    k = _check_k(ranked, k)
    p = p_hat(ranked, k)
    if p == 0.0:
        raise AllCensoredTailError(f"all of the top {k} observations are censored")
    a = beta / p
    return a * a * _ratio_weighted_sum(ranked, curve_kind, k, a)


def weighted_na(ranked: RankedSample, k: int, beta: float) -> float:
    """beta-weighted Nelson-Aalen integral estimator of the tail index."""
    beta = _check_beta("weighted-na", beta)
    return _weighted(ranked, "na", k, beta)


def weighted_km(ranked: RankedSample, k: int, beta: float) -> float:
    """beta-weighted Kaplan-Meier integral estimator of the tail index."""
    beta = _check_beta("weighted-km", beta)
    return _weighted(ranked, "km", k, beta)


def box_cox(u, beta: float):
    """Box-Cox transform integral 1..u of t^(-beta-1) dt = (1 - u^-beta)/beta.

    Continuous in beta at 0, where it equals log(u); requires u >= 1.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 1.0):
        raise ValueError("box_cox requires u >= 1")
    lu = np.log(u)
    if beta == 0.0:
        out = lu
    else:
        out = -np.expm1(-beta * lu) / beta
    return float(out) if out.ndim == 0 else out


def bw(ranked: RankedSample, k: int, beta: float) -> float:
    """Box-Cox/Kaplan-Meier estimator T_k(beta) / (1 - beta * T_k(beta))."""
    beta = float(beta)
    if not np.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    k = _check_k(ranked, k, k_min=2)
    lz = ranked.top_log[: k + 1] - ranked.top_log[k]  # last entry is 0 (the threshold)
    if beta == 0.0:
        kappa = lz
    else:
        kappa = -np.expm1(-beta * lz) / beta
    logr = ranked.curve("km").log_tail_ratios(k, include_start=True)
    # term i (2 <= i <= k): ratio(i, k) * (kappa at Z_{n-i+1:n} minus kappa at Z_{n-i:n})
    t_hat = float(np.sum(np.exp(logr[1:]) * (kappa[1:k] - kappa[2 : k + 1])))
    denom = 1.0 - beta * t_hat
    if denom == 0.0:
        raise DegenerateEstimateError(f"1 - beta*T_k vanished at k={k}")
    return t_hat / denom


def evaluate(ranked: RankedSample, spec: EstimatorSpec, k: int) -> float:
    """Dispatch a single-k evaluation of the given estimator."""
    kind = spec.kind
    if kind == "hill":
        return hill(ranked, k)
    if kind == "p-hat":
        return p_hat(ranked, k)
    if kind == "efg":
        return efg(ranked, k)
    if kind == "worms-km":
        return worms_km(ranked, k)
    if kind == "mns-na":
        return mns_na(ranked, k)
    if kind == "weighted-na":
        return _weighted(ranked, "na", k, spec.beta)
    if kind == "weighted-km":
        return _weighted(ranked, "km", k, spec.beta)
    if kind == "bw":
        return bw(ranked, k, spec.beta)
    raise ValueError(f"unknown estimator kind {kind!r}")


def evaluate_grid(ranked: RankedSample, spec: EstimatorSpec, k_grid) -> tuple:
    """Evaluate the estimator at every k in k_grid.

    Returns (values, ok, failures): values[j] is the estimate at k_grid[j]
    and ok[j] is True on success; failures leave NaN in values and are
    collected as (k, reason_code) pairs.
    """
    k_grid = np.asarray(k_grid, dtype=np.int64)
    values = np.full(k_grid.shape, np.nan)
    ok = np.zeros(k_grid.shape, dtype=bool)
    failures = []
    for j, k in enumerate(k_grid):
        try:
            values[j] = evaluate(ranked, spec, int(k))
            ok[j] = True
        except AllCensoredTailError:
            failures.append((int(k), REASON_ALL_CENSORED))
        except DegenerateEstimateError:
            failures.append((int(k), REASON_DEGENERATE))
    return values, ok, tuple(failures)


def path(
    ranked: RankedSample,
    spec: EstimatorSpec,
    k_min: int | None = None,
    k_max: int | None = None,
) -> EstimatePath:
    """Estimator values over a contiguous range of k.

    Defaults cover [2, n-1] (n for the censoring proportion, which needs no
    threshold observation); pass k_min=1 to start single-step estimators at
    their smallest admissible k.  Failed k's are recorded with reason codes
    rather than dropped silently.
    """
    n = ranked.n
    hi_cap = spec.max_k(n)
    if k_min is None:
        k_min = 2
    if k_max is None:
        k_max = hi_cap
    lo = max(int(k_min), spec.min_k)
    if not lo <= int(k_max) <= hi_cap:
        raise ValueError(
            f"need k_min <= k_max <= {hi_cap} with k_min >= {spec.min_k} for "
            f"{spec.kind}; got [{k_min}, {k_max}] at n={n}"
        )
    k_grid = np.arange(lo, int(k_max) + 1, dtype=np.int64)
    values, ok, failures = evaluate_grid(ranked, spec, k_grid)
    return EstimatePath(spec, k_grid[ok], values[ok], failures)
