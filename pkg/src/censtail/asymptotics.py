"""Asymptotic bias/variance of the weighted estimators and Gaussian intervals.

The limiting law of sqrt(k)(estimate - gamma1) is normal with mean
mu = lambda*beta/(beta - p*tau1) and variance gamma1^2 * beta^2 / (p*(2*beta-1));
the interval construction plugs the point estimate and p_hat into the variance
and takes the bias as zero (the second-order scale lambda is unobservable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "AsymptoticParams",
    "CiResult",
    "sigma2_beta",
    "mu_beta",
    "variance_gap_mns",
    "bw_variance",
    "variance_gap_bw",
    "normal_quantile",
    "confidence_interval",
]


def sigma2_beta(gamma1: float, p: float, beta: float) -> float:
    """Asymptotic variance gamma1^2 * beta^2 / (p * (2*beta - 1)).

    Defined for beta > 1/2; p = 1 is the no-censoring limit, where beta = 1
    recovers the Hill variance gamma1^2.
    """
    if not gamma1 > 0.0:
        raise ValueError(f"gamma1 must be > 0, got {gamma1}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if not beta > 0.5:
        raise ValueError(f"beta must be > 1/2, got {beta}")
    return gamma1 * gamma1 * beta * beta / (p * (2.0 * beta - 1.0))


def mu_beta(lam: float, beta: float, p: float, tau1: float) -> float:
    """Asymptotic bias lambda * beta / (beta - p * tau1)."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if tau1 > 0.0:
        raise ValueError(f"second-order parameter tau1 must be <= 0, got {tau1}")
    denom = beta - p * tau1
    if denom == 0.0:
        raise ValueError("beta - p*tau1 vanished")
    return lam * beta / denom


def variance_gap_mns(gamma1: float, p: float, beta: float) -> float:
    """sigma2_beta(beta) - sigma2_beta(p): variance change against the exponent-1
    Nelson-Aalen estimator. Only defined under weak censoring (p > 1/2);
    negative exactly when 1 < beta < p/(2p - 1)."""
    if not 0.5 < p < 1.0:
        raise ValueError(f"the comparison requires weak censoring 1/2 < p < 1, got p={p}")
    if not beta > 0.5:
        raise ValueError(f"beta must be > 1/2, got {beta}")
    num = (beta - p) * (2.0 * p * beta - p - beta) * gamma1 * gamma1
    return num / (p * (2.0 * p - 1.0) * (2.0 * beta - 1.0))


def bw_variance(gamma1: float, p: float, beta: float) -> float:
    """Asymptotic variance of the Box-Cox/KM estimator:
    gamma1^2 * p * (1 + beta*gamma1)^2 / (2p(1 + beta*gamma1) - 1)."""
    if not gamma1 > 0.0:
        raise ValueError(f"gamma1 must be > 0, got {gamma1}")
    if not 0.5 < p < 1.0:
        raise ValueError(f"requires weak censoring 1/2 < p < 1, got p={p}")
    if not gamma1 * beta > -1.0:
        raise ValueError(f"requires gamma1*beta > -1, got {gamma1 * beta}")
    denom = 2.0 * p * (1.0 + beta * gamma1) - 1.0
    if denom == 0.0:
        raise ValueError("variance denominator 2p(1 + beta*gamma1) - 1 vanished")
    u = 1.0 + beta * gamma1
    return gamma1 * gamma1 * p * u * u / denom


def variance_gap_bw(gamma1: float, p: float, beta: float) -> float:
    """bw_variance minus the exponent-1 KM estimator's variance gamma1^2*p/(2p-1).

    Negative exactly when 0 < gamma1*beta < 2(1-p)/(2p-1).
    """
    if not gamma1 > 0.0:
        raise ValueError(f"gamma1 must be > 0, got {gamma1}")
    if not 0.5 < p < 1.0:
        raise ValueError(f"the comparison requires weak censoring 1/2 < p < 1, got p={p}")
    if not gamma1 * beta > -1.0:
        raise ValueError(f"requires gamma1*beta > -1, got {gamma1 * beta}")
    denom = 2.0 * p * (1.0 + beta * gamma1) - 1.0
    if denom == 0.0:
        raise ValueError("variance denominator 2p(1 + beta*gamma1) - 1 vanished")
    u = beta * gamma1
    return gamma1 * gamma1 * p * u * ((2.0 * p - 1.0) * u - 2.0 * (1.0 - p)) / (
        (2.0 * p - 1.0) * denom
    )


@dataclass(frozen=True)
class AsymptoticParams:
    """Parameter bundle for the limiting normal law."""

    gamma1: float
    p: float
    beta: float
    tau1: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if not self.gamma1 > 0.0:
            raise ValueError(f"gamma1 must be > 0, got {self.gamma1}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if self.tau1 > 0.0:
            raise ValueError(f"tau1 must be <= 0, got {self.tau1}")

    @property
    def sigma2(self) -> float:
        return sigma2_beta(self.gamma1, self.p, self.beta)

    @property
    def mu(self) -> float:
        return mu_beta(self.lam, self.beta, self.p, self.tau1)


# Rational minimax approximation to the standard normal quantile (absolute
# error far below 1e-9 over (0, 1)), split at |p - 1/2| = 0.425 with two
# tail branches in sqrt(-log) scale.
_PPND_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_PPND_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
    2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_PPND_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_PPND_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_PPND_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_PPND_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coef, x):
    acc = 0.0
    for c in reversed(coef):
        acc = acc * x + c
    return acc


def normal_quantile(prob: float) -> float:
    """Inverse standard normal cdf, accurate to well below 1e-9."""
    if not 0.0 < prob < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {prob}")
    q = prob - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_PPND_A, r) / _poly(_PPND_B, r)
    r = prob if q < 0.0 else 1.0 - prob
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_PPND_C, r) / _poly(_PPND_D, r)
    else:
        r -= 5.0
        val = _poly(_PPND_E, r) / _poly(_PPND_F, r)
    return -val if q < 0.0 else val


@dataclass(frozen=True)
class CiResult:
    """Point estimate with a symmetric plug-in Gaussian interval."""

    point: float
    lower: float
    upper: float
    level: float
    se: float


def confidence_interval(
    estimate: float, k: int, p_hat: float, beta: float, level: float
) -> CiResult:
    """Plug-in interval estimate +- z * estimate * beta / sqrt(k * p_hat * (2*beta - 1)).

    Uses the estimate itself inside the asymptotic standard error and ignores
    the asymptotic bias (its scale is unobservable); level = 0 degenerates to
    the point itself.
    """
    if not 0.0 <= level < 1.0:
        raise ValueError(f"level must lie in [0, 1), got {level}")
    if int(k) < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 < p_hat <= 1.0:
        raise ValueError(f"p_hat must lie in (0, 1], got {p_hat}")
    if not beta > 0.5:
        raise ValueError(f"beta must be > 1/2, got {beta}")
    se = abs(estimate) * beta / math.sqrt(k * p_hat * (2.0 * beta - 1.0))
    z = 0.0 if level == 0.0 else normal_quantile(0.5 * (1.0 + level))
    half = z * se
    return CiResult(estimate, estimate - half, estimate + half, level, se)
