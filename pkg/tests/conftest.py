import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

# Project-wide seed for every randomized/acceptance test; fixed up front.
MASTER_SEED = 20260808

# One line per acceptance criterion, shown after the run (never captured).
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(MASTER_SEED)


def random_censored(rng, n, censored_share=0.3):
    """A generic censored sample: Pareto-ish magnitudes, Bernoulli indicators."""
    z = (1.0 - rng.random(n)) ** (-0.4)
    delta = (rng.random(n) >= censored_share).astype(np.int64)
    return z, delta


def dataset_path(name):
    """Locate an optional real dataset; returns None when absent."""
    roots = []
    env = os.environ.get("CENSTAIL_DATA_DIR")
    if env:
        roots.append(env)
    roots.append(os.path.join(os.path.dirname(os.path.dirname(__file__)), "data"))
    for root in roots:
        candidate = os.path.join(root, name)
        if os.path.exists(candidate):
            return candidate
    return None


FIXTURE_Z20 = [4.1, 1.3, 2.9, 11.0, 1.7, 6.5, 3.3, 22.8, 1.1, 5.2,
               2.1, 8.8, 1.5, 3.9, 16.1, 2.5, 7.4, 1.9, 4.8, 31.7]
FIXTURE_D20 = [1, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 1]
