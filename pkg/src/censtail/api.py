"""Scikit-learn style front-end for tail index estimation.

``TailIndexEstimator`` wraps the functional core behind the familiar
fit/get_params surface so the method drops into pipelines, grid searches and
clone()-based tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .asymptotics import confidence_interval
from .estimators import ESTIMATOR_KINDS, EstimatorSpec, evaluate
from .estimators import p_hat as _p_hat
from .estimators import path as _path
from .kselect import KSelectConfig, reiss_thomas
from .survival import CensoredSample, rank

__all__ = ["TailIndexEstimator", "check_censored_data"]


def check_censored_data(X, delta=None):
    """Coerce input into validated (z, delta) arrays.

    Accepts a two-column array [[z, delta], ...], or separate z and delta
    one-dimensional sequences.  Enforces z > 0 and delta in {0, 1}.
    """
    if delta is None:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValueError(
                "expected a two-column array [z, delta] or separate z and delta"
            )
        z, delta = X[:, 0], X[:, 1]
    else:
        z = np.asarray(X, dtype=float)
    sample = CensoredSample(np.asarray(z, dtype=float), np.asarray(delta))
    return sample.z, sample.delta


class TailIndexEstimator(BaseEstimator):
    """Tail index of right-censored heavy-tailed data.

    Parameters
    ----------
    estimator : str
        One of the supported kinds ("hill", "p-hat", "efg", "worms-km",
        "mns-na", "weighted-na", "weighted-km", "bw").
    beta : float or None
        Tuning parameter of the weighted and Box-Cox estimators; values just
        above 1 keep the weighted estimators valid under any censoring
        strength.
    k : int or "auto"
        Number of top order statistics, or "auto" for the adaptive
        deviation-minimising choice.
    nu : float
        Weight exponent of the adaptive rule (only used when k="auto").
    ci_level : float or None
        If set, fit() also computes a plug-in Gaussian confidence interval.

    Attributes
    ----------
    tail_index_ : float
        The point estimate.
    k_ : int
        The k actually used.
    p_hat_ : float
        Estimated proportion of uncensored observations among the top k_.
    n_ : int
        Sample size seen during fit.
    ci_lower_, ci_upper_, se_ : float
        Confidence bounds and standard error (only when ci_level is set).
    """

    def __init__(self, estimator="weighted-na", beta=1.01, k="auto", nu=0.3,
                 ci_level=None):
        self.estimator = estimator
        self.beta = beta
        self.k = k
        self.nu = nu
        self.ci_level = ci_level

    def _spec(self) -> EstimatorSpec:
        if self.estimator not in ESTIMATOR_KINDS:
            raise ValueError(
                f"estimator must be one of {ESTIMATOR_KINDS}, got {self.estimator!r}"
            )
        beta = self.beta if self.estimator in ("weighted-na", "weighted-km", "bw") else None
        return EstimatorSpec(self.estimator, beta)

    def fit(self, X, y=None):
        """Estimate the tail index from censored observations.

        X is a two-column array [z, delta] (y is ignored, present for
        pipeline compatibility).
        """
        z, delta = check_censored_data(X)
        ranked = rank(CensoredSample(z, delta))
        spec = self._spec()
        if self.k == "auto":
            pth = _path(ranked, spec, k_min=spec.min_k, k_max=ranked.n - 1)
            sel = reiss_thomas(pth, KSelectConfig(nu=self.nu, k_min=2, k_max=ranked.n - 1))
            k = sel.k_opt
            self.selection_criterion_ = sel.criterion
        else:
            k = int(self.k)
        self.tail_index_ = evaluate(ranked, spec, k)
        self.k_ = k
        self.p_hat_ = _p_hat(ranked, k)
        self.n_ = ranked.n
        if self.ci_level is not None:
            beta_ci = spec.beta if spec.beta is not None else 1.0
            p_ci = 1.0 if spec.kind == "hill" else self.p_hat_
            ci = confidence_interval(self.tail_index_, k, p_ci, beta_ci, self.ci_level)
            self.ci_lower_ = ci.lower
            self.ci_upper_ = ci.upper
            self.se_ = ci.se
        return self
