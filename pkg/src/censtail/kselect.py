"""Adaptive choice of the number k of top order statistics.

The selection rule minimises, over k, the weighted mean absolute deviation of
the estimate path around its running median,

    (1/k) * sum_{i<=k} i^nu * |xi_i - median(xi_1..xi_k)|,

with ties broken towards the smallest k.  The running medians come from a
dual-heap sweep over the growing prefix.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .estimators import EstimatePath

__all__ = ["KSelectConfig", "KSelectResult", "NoAdmissibleKError", "reiss_thomas", "prefix_medians"]


class NoAdmissibleKError(ValueError):
    """No k in the configured range has a fully defined estimate prefix."""


@dataclass(frozen=True)
class KSelectConfig:
    """nu weights deviations by i^nu (0 <= nu <= 1/2); 0.3 performs well."""

    nu: float = 0.3
    k_min: int = 2
    k_max: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.nu <= 0.5:
            raise ValueError(f"nu must lie in [0, 1/2], got {self.nu}")
        if self.k_min < 2:
            raise ValueError(f"k_min must be >= 2, got {self.k_min}")
        if self.k_max is not None and self.k_max < self.k_min:
            raise ValueError("k_min must not exceed k_max")


@dataclass(frozen=True)
class KSelectResult:
    k_opt: int
    criterion: float

    def __iter__(self):
        return iter((self.k_opt, self.criterion))


def prefix_medians(values: np.ndarray) -> np.ndarray:
    """Median of values[:m] for every m, via two heaps; even-length prefixes
    take the mean of the two central order statistics."""
    lo: list = []  # max-heap (negated) of the lower half
    hi: list = []  # min-heap of the upper half
    out = np.empty(len(values))
    for m, x in enumerate(values):
        if lo and x > -lo[0]:
            heapq.heappush(hi, x)
        else:
            heapq.heappush(lo, -x)
        if len(lo) > len(hi) + 1:
            heapq.heappush(hi, -heapq.heappop(lo))
        elif len(hi) > len(lo):
            heapq.heappush(lo, -heapq.heappop(hi))
        out[m] = -lo[0] if len(lo) > len(hi) else 0.5 * (-lo[0] + hi[0])
    return out


def _usable_prefix(path: EstimatePath, k_cap: int) -> tuple:
    """Contiguous run of successful estimates from the path origin.

    The estimate sequence starts at the smallest k the estimator admits on
    this sample; any later failure disqualifies every k from there on (the
    criterion is a prefix statistic, so no imputation).
    """
    if path.k_values.size == 0:
        raise NoAdmissibleKError("path is empty: no admissible k")
    i0 = int(path.k_values[0])
    failed = sorted(k for k, _ in path.failures if k >= i0)
    hi = failed[0] - 1 if failed else int(path.k_values[-1])
    hi = min(hi, k_cap)
    m = hi - i0 + 1
    if m < 1:
        raise NoAdmissibleKError("no admissible k: the usable path prefix is empty")
    # the path omits failures, so the first m entries must be exactly i0..hi
    if not np.array_equal(path.k_values[:m], np.arange(i0, hi + 1)):
        raise ValueError("path must cover a contiguous k range (stride 1)")
    return i0, path.estimates[:m]


def reiss_thomas(path: EstimatePath, config: KSelectConfig = KSelectConfig()) -> KSelectResult:
    """Minimise the weighted absolute-deviation criterion over admissible k.

    The path must cover a contiguous k range; entries carry the estimate based
    on that many top order statistics.  Returns the minimising k and the
    criterion value there, preferring the smallest k on ties.
    """
    i0, xi = _usable_prefix(path, config.k_max if config.k_max is not None else 10**18)
    k_lo = max(config.k_min, i0)
    k_hi = i0 + len(xi) - 1
    if k_lo > k_hi:
        raise NoAdmissibleKError(
            f"no admissible k in [{config.k_min}, {config.k_max}]: usable path "
            f"prefix ends at k={k_hi}"
        )
    idx = np.arange(i0, k_hi + 1, dtype=float)
    weights = idx**config.nu
    medians = prefix_medians(xi)
    best_k, best_crit = -1, np.inf
    for k in range(k_lo, k_hi + 1):
        m = k - i0 + 1
        crit = float(np.dot(weights[:m], np.abs(xi[:m] - medians[m - 1])) / m)
        if crit < best_crit:
            best_k, best_crit = k, crit
    return KSelectResult(best_k, best_crit)
