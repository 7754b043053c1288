import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import ndtri

from censtail.asymptotics import (
    AsymptoticParams,
    bw_variance,
    confidence_interval,
    mu_beta,
    normal_quantile,
    sigma2_beta,
    variance_gap_bw,
    variance_gap_mns,
)
from censtail.estimators import EstimatorSpec
from censtail.montecarlo import McConfig, run
from censtail.sampling import CensoringScenario, Pareto, Seed, matched_censor

from conftest import MASTER_SEED


def frac_sigma2(gamma1, p, beta):
    g, p, b = Fraction(gamma1), Fraction(p), Fraction(beta)
    return g * g * b * b / (p * (2 * b - 1))


def frac_mu(lam, beta, p, tau1):
    lam, b, p, t = Fraction(lam), Fraction(beta), Fraction(p), Fraction(tau1)
    return lam * b / (b - p * t)


def test_sigma2_uncensored_hill_limit():
    assert sigma2_beta(0.4, 1.0, 1.0) == pytest.approx(0.16, rel=1e-15)


def test_sigma2_at_beta_equals_p():
    # no-weighting case: variance collapses to gamma1^2 p / (2p - 1)
    for gamma1, p in [(0.5, 0.76), (0.4, 0.6), (1.1, 0.9)]:
        want = gamma1 * gamma1 * p / (2 * p - 1)
        assert sigma2_beta(gamma1, p, p) == pytest.approx(want, rel=1e-14)


def test_sigma2_frozen_strong_censoring_value():
    got = sigma2_beta(0.4, 0.3, 1.01)
    assert got == pytest.approx(0.16 * 1.0201 / (0.3 * 1.02), rel=1e-14)
    assert got == pytest.approx(0.53338, abs=1e-5)  # truncated 5-decimal display


def test_sigma2_matches_exact_rational_oracle():
    grid = [
        (Fraction(2, 5), Fraction(3, 10), Fraction(101, 100)),
        (Fraction(7, 10), Fraction(1, 2), Fraction(3, 2)),
        (Fraction(11, 10), Fraction(9, 10), Fraction(2)),
        (Fraction(1, 2), Fraction(19, 25), Fraction(19, 25)),
    ]
    for g, p, b in grid:
        want = float(frac_sigma2(g, p, b))
        assert sigma2_beta(float(g), float(p), float(b)) == pytest.approx(want, rel=1e-12)


def test_sigma2_domain_errors():
    with pytest.raises(ValueError):
        sigma2_beta(0.4, 0.5, 0.5)
    with pytest.raises(ValueError):
        sigma2_beta(0.4, 0.0, 1.0)
    with pytest.raises(ValueError):
        sigma2_beta(-0.4, 0.5, 1.0)


def test_sigma2_minimised_at_beta_one():
    betas = np.linspace(0.51, 4.0, 2000)
    for p in (0.3, 0.5, 0.9):
        values = [sigma2_beta(0.4, p, b) for b in betas]
        assert abs(betas[int(np.argmin(values))] - 1.0) < 2e-3
        assert min(values) >= sigma2_beta(0.4, p, 1.0) - 1e-12


def test_mu_values():
    assert mu_beta(0.0, 1.3, 0.4, -0.5) == 0.0
    assert mu_beta(1.0, 1.3, 0.4, 0.0) == 1.0
    assert mu_beta(1.0, 0.77, 0.9, 0.0) == 1.0
    got = mu_beta(0.5, 1.01, 0.3, -1.0)
    assert got == pytest.approx(0.505 / 1.31, rel=1e-14)
    assert got == pytest.approx(0.38550, abs=5e-6)
    assert mu_beta(0.5, 1.01, 0.3, -1.0) == pytest.approx(
        float(frac_mu(Fraction(1, 2), Fraction(101, 100), Fraction(3, 10), -1)), rel=1e-13
    )


def test_mu_linear_in_lambda():
    base = mu_beta(1.0, 1.2, 0.4, -0.7)
    for lam in (-2.0, 0.25, 3.5):
        assert mu_beta(lam, 1.2, 0.4, -0.7) == pytest.approx(lam * base, rel=1e-14)


def test_mu_validation():
    with pytest.raises(ValueError):
        mu_beta(1.0, 1.2, 0.4, 0.5)  # tau1 > 0


def test_variance_gap_mns_signs():
    assert variance_gap_mns(0.5, 0.76, 0.76) == pytest.approx(0.0, abs=1e-15)
    assert variance_gap_mns(0.5, 0.76, 1.01) < 0.0  # p/(2p-1) = 1.4615 > 1.01
    assert variance_gap_mns(0.5, 0.76, 2.0) > 0.0
    with pytest.raises(ValueError):
        variance_gap_mns(0.5, 0.5, 1.01)


def test_variance_gap_mns_matches_sigma2_difference(rng):
    for _ in range(200):
        gamma1 = float(rng.uniform(0.1, 2.0))
        p = float(rng.uniform(0.51, 0.99))
        beta = float(rng.uniform(0.51, 3.0))
        lhs = sigma2_beta(gamma1, p, p) - sigma2_beta(gamma1, p, beta)
        assert lhs == pytest.approx(-variance_gap_mns(gamma1, p, beta), rel=1e-12, abs=1e-12)


def test_variance_gap_bw_matches_direct_difference(rng):
    assert variance_gap_bw(0.5, 0.7, 0.0) == 0.0
    for _ in range(200):
        gamma1 = float(rng.uniform(0.1, 2.0))
        p = float(rng.uniform(0.51, 0.99))
        beta = float(rng.uniform(-0.9 / gamma1, 3.0))
        worms_var = gamma1 * gamma1 * p / (2 * p - 1)
        want = bw_variance(gamma1, p, beta) - worms_var
        assert variance_gap_bw(gamma1, p, beta) == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_variance_gap_bw_sign_threshold():
    gamma1, p = 0.5, 0.7
    threshold = 2 * (1 - p) / (2 * p - 1) / gamma1
    assert variance_gap_bw(gamma1, p, 0.99 * threshold) < 0.0
    assert variance_gap_bw(gamma1, p, 1.01 * threshold) > 0.0
    assert variance_gap_bw(0.5, 0.7, 1.0) < 0.0  # 0.5 < 2(1-0.7)/(2*0.7-1) = 1.5


def test_asymptotic_params_bundle():
    params = AsymptoticParams(0.4, 0.3, 1.01, tau1=-1.0, lam=0.5)
    assert params.sigma2 == sigma2_beta(0.4, 0.3, 1.01)
    assert params.mu == mu_beta(0.5, 1.01, 0.3, -1.0)
    with pytest.raises(ValueError):
        AsymptoticParams(0.4, 0.3, 1.01, tau1=0.2)


def test_normal_quantile_against_scipy():
    grid = np.concatenate(
        [
            np.linspace(1e-12, 1 - 1e-12, 20001),
            [1e-15, 1e-9, 0.5, 0.975, 1 - 1e-9, 1 - 1e-15],
        ]
    )
    worst = max(abs(normal_quantile(float(p)) - ndtri(p)) for p in grid)
    assert worst < 1e-9
    assert normal_quantile(0.5) == 0.0
    assert normal_quantile(0.2) == pytest.approx(-normal_quantile(0.8), rel=1e-14)
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            normal_quantile(bad)


def test_confidence_interval_shape():
    ci = confidence_interval(0.5, 100, 0.5, 1.01, 0.95)
    want_se = 0.5 * 1.01 / math.sqrt(100 * 0.5 * 1.02)
    want_half = ndtri(0.975) * want_se
    assert ci.se == pytest.approx(want_se, rel=1e-12)
    assert ci.upper - ci.point == pytest.approx(want_half, rel=1e-9)
    assert ci.point - ci.lower == pytest.approx(ci.upper - ci.point, rel=1e-12)
    assert ci.level == 0.95


def test_confidence_interval_degenerate_level():
    ci = confidence_interval(0.7, 50, 0.8, 1.2, 0.0)
    assert ci.lower == ci.point == ci.upper == 0.7


def test_confidence_interval_validation():
    with pytest.raises(ValueError):
        confidence_interval(0.5, 100, 0.5, 1.01, 1.0)
    with pytest.raises(ValueError):
        confidence_interval(0.5, 0, 0.5, 1.01, 0.9)
    with pytest.raises(ValueError):
        confidence_interval(0.5, 100, 0.0, 1.01, 0.9)
    with pytest.raises(ValueError):
        confidence_interval(0.5, 100, 0.5, 0.5, 0.9)


@pytest.mark.slow
def test_limiting_variance_monte_carlo_calibration():
    """Monte Carlo calibration against the closed-form variance.

    Strict Pareto scenarios make the second-order scale vanish; with k well
    into the asymptotic regime the replication variance of sqrt(k)(est - g1)
    matches gamma1^2 beta^2/(p (2 beta - 1)) within 15%.
    """
    cases = [
        (0.5, 12000, 10000, 2000),
        (0.3, 22000, 20000, 1200),
    ]
    for p, n, k, reps in cases:
        scenario = CensoringScenario(Pareto(0.4), matched_censor(Pareto(0.4), p))
        cfg = McConfig(
            scenario, n, reps, (EstimatorSpec("weighted-na", 1.01),),
            np.array([k]), Seed(MASTER_SEED + 5),
        )
        summary = run(cfg, workers=8)
        got = k * summary.variance[0, 0]
        want = sigma2_beta(0.4, p, 1.01)
        assert abs(got / want - 1.0) < 0.15, f"p={p}: {got} vs {want}"
