import statistics

import numpy as np
import pytest

from censtail.estimators import EstimatePath, EstimatorSpec
from censtail.kselect import (
    KSelectConfig,
    NoAdmissibleKError,
    prefix_medians,
    reiss_thomas,
)

import oracles

HILL = EstimatorSpec("hill")


def make_path(values, start=1, failures=()):
    k = np.arange(start, start + len(values))
    return EstimatePath(HILL, k, np.asarray(values, dtype=float), failures)


def test_constant_path_selects_smallest_k():
    res = reiss_thomas(make_path([3.7] * 40))
    assert res.k_opt == 2
    assert res.criterion == 0.0


def test_three_point_hand_example():
    path = make_path([1.0, 1.0, 5.0])
    res = reiss_thomas(path, KSelectConfig(nu=0.0))
    assert (res.k_opt, res.criterion) == (2, 0.0)
    # brute criterion at k=3 is (|1-1| + |1-1| + |5-1|)/3 = 4/3
    k3 = oracles.reiss_thomas_direct([1.0, 1.0, 5.0], 1, 0.0, 3, 3)
    assert k3 == (3, pytest.approx(4.0 / 3.0))


def test_matches_brute_force_on_random_paths(rng):
    for _ in range(40):
        m = int(rng.integers(5, 50))
        xi = rng.normal(0.5, 0.2, m)
        nu = float(rng.choice([0.0, 0.3, 0.5]))
        path = make_path(xi)
        got = reiss_thomas(path, KSelectConfig(nu=nu))
        want_k, want_crit = oracles.reiss_thomas_direct(xi.tolist(), 1, nu, 2, m)
        assert got.k_opt == want_k
        assert got.criterion == pytest.approx(want_crit, rel=1e-12, abs=1e-15)


def test_scaling_leaves_argmin_unchanged(rng):
    xi = rng.normal(1.0, 0.3, 60)
    base = reiss_thomas(make_path(xi))
    for c in (1e-6, 42.0, 1e7):
        scaled = reiss_thomas(make_path(c * xi))
        assert scaled.k_opt == base.k_opt
        assert scaled.criterion == pytest.approx(c * base.criterion, rel=1e-12)


def test_k_opt_respects_bounds(rng):
    xi = rng.normal(1.0, 0.3, 80)
    cfg = KSelectConfig(nu=0.3, k_min=10, k_max=30)
    res = reiss_thomas(make_path(xi), cfg)
    assert 10 <= res.k_opt <= 30


def test_origin_shift_and_failures():
    # estimator undefined below k=3 and again at k=6: usable prefix is 3..5
    path = make_path(
        [1.0, 1.0, 1.0, 9.0, 9.0],
        start=3,
        failures=((1, "all-censored-tail"), (2, "all-censored-tail"), (6, "degenerate")),
    )
    res = reiss_thomas(path)
    assert res.k_opt == 3
    assert res.criterion == 0.0


def test_non_contiguous_path_rejected():
    path = EstimatePath(HILL, np.array([2, 4, 6]), np.array([1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        reiss_thomas(path)


def test_no_admissible_k():
    path = make_path([1.0, 2.0], start=1)
    with pytest.raises(NoAdmissibleKError):
        reiss_thomas(path, KSelectConfig(k_min=10))
    empty = EstimatePath(HILL, np.array([], dtype=int), np.array([]), ((1, "degenerate"),))
    with pytest.raises(NoAdmissibleKError):
        reiss_thomas(empty)


def test_prefix_medians_match_statistics(rng):
    values = rng.normal(size=257)
    medians = prefix_medians(values)
    for m in range(1, len(values) + 1):
        assert medians[m - 1] == pytest.approx(statistics.median(values[:m]), abs=1e-15)


def test_config_validation():
    with pytest.raises(ValueError):
        KSelectConfig(nu=0.6)
    with pytest.raises(ValueError):
        KSelectConfig(nu=-0.1)
    with pytest.raises(ValueError):
        KSelectConfig(k_min=1)
    with pytest.raises(ValueError):
        KSelectConfig(k_min=10, k_max=5)


def test_result_unpacks_as_tuple():
    k, crit = reiss_thomas(make_path([2.0] * 10))
    assert (k, crit) == (2, 0.0)
