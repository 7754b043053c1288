"""Heavy-tailed distribution models and censored-sample generation.

Provides inverse-transform samplers for the Burr, Frechet, strict Pareto and
log-perturbed ("modified") Pareto families, plus the right-censoring mechanism
Z = min(X, C), delta = 1{X <= C} with independently drawn target X and
censoring variable C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .survival import CensoredSample

__all__ = [
    "Burr",
    "Frechet",
    "Pareto",
    "ModifiedPareto",
    "HeavyTailModel",
    "CensoringScenario",
    "Seed",
    "solve_censor_index",
    "matched_censor",
    "generate",
    "model_from_dict",
    "model_to_dict",
]

# Smallest uniform draw we feed to a quantile function; keeps the draws in the
# open interval (0, 1) where the quantiles are finite and positive.
_U_FLOOR = 2.0 ** -53


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("probability level must lie strictly inside (0, 1)")
    return u


def _positive(name: str, value: float) -> None:
    if not (value > 0.0) or not math.isfinite(value):
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class Burr:
    """Burr distribution with cdf 1 - (1 + x^(1/eta))^(-eta/zeta), x > 0.

    ``zeta`` is the tail index, ``eta`` the second shape parameter.
    """

    zeta: float
    eta: float

    def __post_init__(self):
        _positive("zeta", self.zeta)
        _positive("eta", self.eta)

    @property
    def tail_index(self) -> float:
        return self.zeta

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = 1.0 - (1.0 + x[pos] ** (1.0 / self.eta)) ** (-self.eta / self.zeta)
        return out if out.ndim else float(out)

    def quantile(self, u):
        u = _check_u(u)
        x = ((1.0 - u) ** (-self.zeta / self.eta) - 1.0) ** self.eta
        return x if x.ndim else float(x)


@dataclass(frozen=True)
class Frechet:
    """Frechet distribution with cdf exp(-x^(-1/zeta)), x > 0."""

    zeta: float

    def __post_init__(self):
        _positive("zeta", self.zeta)

    @property
    def tail_index(self) -> float:
        return self.zeta

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = np.exp(-(x[pos] ** (-1.0 / self.zeta)))
        return out if out.ndim else float(out)

    def quantile(self, u):
        u = _check_u(u)
        x = (-np.log(u)) ** (-self.zeta)
        return x if x.ndim else float(x)


@dataclass(frozen=True)
class Pareto:
    """Strict Pareto distribution with cdf 1 - x^(-1/zeta), x >= 1."""

    zeta: float

    def __post_init__(self):
        _positive("zeta", self.zeta)

    @property
    def tail_index(self) -> float:
        return self.zeta

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x >= 1.0
        out[pos] = 1.0 - x[pos] ** (-1.0 / self.zeta)
        return out if out.ndim else float(out)

    def quantile(self, u):
        u = _check_u(u)
        x = (1.0 - u) ** (-self.zeta)
        return x if x.ndim else float(x)


@dataclass(frozen=True)
class ModifiedPareto:
    """Pareto with a logarithmic perturbation: cdf 1 - x^(-1/g)(1 + 1/log x), x > e.

    The cdf does not start at zero: its limit at x -> e+ is 1 - 2 e^(-1/g),
    so for g < 1/log(2) the distribution carries an atom of that mass at e.
    The quantile function is the generalized inverse, evaluated by bisection
    on the continuous part; no closed form exists.
    """

    gamma1: float

    _BISECT_TOL = 1e-12

    def __post_init__(self):
        _positive("gamma1", self.gamma1)

    @property
    def tail_index(self) -> float:
        return self.gamma1

    @property
    def atom_at_e(self) -> float:
        """Probability mass sitting at the left endpoint e."""
        return max(0.0, 1.0 - 2.0 * math.exp(-1.0 / self.gamma1))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > math.e
        xp = x[pos]
        out[pos] = np.maximum(
            0.0, 1.0 - xp ** (-1.0 / self.gamma1) * (1.0 + 1.0 / np.log(xp))
        )
        np.copyto(out, self.atom_at_e, where=(x == math.e))
        return out if out.ndim else float(out)

    def quantile(self, u):
        u = _check_u(u)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        x = np.full(u.shape, math.e)
        solve = u > self.atom_at_e
        if np.any(solve):
            x[solve] = self._bisect(u[solve])
        return float(x[0]) if scalar else x

    def _bisect(self, u):
        lo = np.full(u.shape, math.e)
        hi = np.full(u.shape, 2.0 * math.e)
        while True:
            short = self.cdf(hi) < u
            if not np.any(short):
                break
            hi[short] *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.max((hi - lo) / lo) < self._BISECT_TOL:
                break
        return 0.5 * (lo + hi)


HeavyTailModel = Union[Burr, Frechet, Pareto, ModifiedPareto]

_MODEL_KINDS = {
    "burr": Burr,
    "frechet": Frechet,
    "pareto": Pareto,
    "modified-pareto": ModifiedPareto,
}


def model_from_dict(spec: dict) -> HeavyTailModel:
    """Build a model from a JSON-style dict, e.g. {"kind": "burr", "zeta": .., "eta": ..}."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("model spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind not in _MODEL_KINDS:
        raise ValueError(
            f"unknown model kind {kind!r}; expected one of {sorted(_MODEL_KINDS)}"
        )
    cls = _MODEL_KINDS[kind]
    fields = {k: v for k, v in spec.items() if k != "kind"}
    expected = set(cls.__dataclass_fields__)
    unknown = set(fields) - expected
    if unknown:
        raise ValueError(f"unknown field(s) {sorted(unknown)} for model kind {kind!r}")
    missing = expected - set(fields)
    if missing:
        raise ValueError(f"missing field(s) {sorted(missing)} for model kind {kind!r}")
    return cls(**fields)


def model_to_dict(model: HeavyTailModel) -> dict:
    kind = {Burr: "burr", Frechet: "frechet", Pareto: "pareto", ModifiedPareto: "modified-pareto"}[type(model)]
    out = {"kind": kind}
    for name in model.__dataclass_fields__:
        out[name] = getattr(model, name)
    return out


def solve_censor_index(gamma1: float, p: float) -> float:
    """Tail index gamma2 of the censoring variable yielding an upper-tail
    uncensored proportion p = gamma2 / (gamma1 + gamma2)."""
    _positive("gamma1", gamma1)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    return p * gamma1 / (1.0 - p)


@dataclass(frozen=True)
class CensoringScenario:
    """A target model censored by an independent model; censor=None disables
    censoring (C identically +infinity, all observations uncensored)."""

    target: HeavyTailModel
    censor: HeavyTailModel | None = None

    @property
    def gamma1(self) -> float:
        return self.target.tail_index

    @property
    def p(self) -> float:
        """Limiting proportion of uncensored observations in the upper tail."""
        if self.censor is None:
            return 1.0
        g1, g2 = self.target.tail_index, self.censor.tail_index
        return g2 / (g1 + g2)


def matched_censor(target: HeavyTailModel, p: float) -> HeavyTailModel:
    """Censoring model from the same family as ``target`` (sharing any second
    shape parameter) whose tail index solves p = gamma2/(gamma1 + gamma2)."""
    g2 = solve_censor_index(target.tail_index, p)
    if isinstance(target, Burr):
        return Burr(g2, target.eta)
    if isinstance(target, Frechet):
        return Frechet(g2)
    if isinstance(target, Pareto):
        return Pareto(g2)
    raise ValueError(f"no same-family censor construction for {type(target).__name__}")


@dataclass(frozen=True)
class Seed:
    """Splittable random seed; child r is a pure function of (master, r)."""

    master: int
    path: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.master) < 2**64:
            raise ValueError("master seed must be a 64-bit unsigned integer")

    def child(self, r: int) -> "Seed":
        return Seed(self.master, self.path + (int(r),))

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master, spawn_key=self.path)
        return np.random.default_rng(ss)


def _open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.random(n)
    u[u == 0.0] = _U_FLOOR
    return u


def generate(scenario: CensoringScenario, n: int, seed: Seed) -> CensoredSample:
    """Draw n i.i.d. censored pairs (Z, delta) from the scenario.

    X and C come from independent uniforms through the models' quantile
    functions; the output is reproducible given the seed.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = seed.rng()
    x = scenario.target.quantile(_open_uniform(rng, n))
    if scenario.censor is None:
        return CensoredSample(x, np.ones(n, dtype=np.int64))
    c = scenario.censor.quantile(_open_uniform(rng, n))
    z = np.minimum(x, c)
    delta = (x <= c).astype(np.int64)
    return CensoredSample(z, delta)
