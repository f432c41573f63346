"""
Randomized scenarios for the theorem harness

Vectors related by ⪰_w are built by averaging toward the mean (a T-transform
chain collapses to λα + (1 − λ)ᾱ) and then adding nonnegative increments;
⪰_p pairs use the same construction on log α. Generator pairs are drawn from
families whose hypotheses are expected to hold, so a non-vacuous corpus
exercises every conclusion.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..copulas.generators import GeneratorSpec, make_generator
from ..errors import CatalogError
from ..lifetimes import BaselineDist, Exponential, Weibull
from ..systems import ShockedSystem, SystemModel
from .majorization import MajorizationMode, majorizes
from .theorems import TheoremReport, get_theorem, run_theorem

logger = logging.getLogger(__name__)

GeneratorPair = Tuple[GeneratorSpec, GeneratorSpec]
PairSampler = Callable[[np.random.Generator], GeneratorPair]


def random_baseline(rng: np.random.Generator) -> BaselineDist:
    if rng.random() < 0.25:
        return Exponential(rate=float(rng.uniform(0.5, 2.0)))
    return Weibull(scale=float(rng.uniform(0.5, 2.0)), shape=float(rng.choice([0.5, 1.5, 2.0, 3.0])))


def _random_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.exp(rng.uniform(np.log(0.2), np.log(5.0), size=n))


def _dominated(rng: np.random.Generator, v: np.ndarray) -> np.ndarray:
    """A vector weakly supermajorized by v: averaged toward the mean, nudged up, shuffled."""
    lam = rng.uniform(0.0, 1.0)
    spread = np.abs(v).mean() + 0.1
    bumps = rng.uniform(0.0, 0.5, size=v.size) * spread * (rng.random(v.size) < 0.5)
    out = lam * v + (1.0 - lam) * v.mean() + bumps
    return rng.permutation(out)


def w_pair(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(α, β) with α ⪰_w β."""
    while True:
        alpha = _random_vector(rng, n)
        beta = _dominated(rng, alpha)
        if majorizes(alpha, beta, MajorizationMode.W):
            return alpha, beta


def p_pair(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(α, β) with α ⪰_p β."""
    while True:
        alpha = _random_vector(rng, n)
        beta = np.exp(_dominated(rng, np.log(alpha)))
        if majorizes(alpha, beta, MajorizationMode.P):
            return alpha, beta


def shock_pair(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(p, q) with qᵢ >= pᵢ before q is shuffled, so Πp <= Πq."""
    p = rng.uniform(0.3, 1.0, size=n)
    q = np.minimum(1.0, p * np.exp(rng.uniform(0.0, 0.3, size=n)))
    return p, rng.permutation(q)


def _g(name: str, value: Optional[float] = None) -> GeneratorSpec:
    return make_generator(name, {} if value is None else {"theta": value})


def _remark_pairs(rng) -> GeneratorPair:
    case = rng.integers(3)
    if case == 0:
        theta = rng.uniform(0.2, 1.0)
        return _g("gh_exp", theta), _g("log_frac", theta)
    if case == 1:
        theta = rng.uniform(1.2, 4.0)
        return _g("log_frac", theta), _g("log_pow", theta)
    theta1 = rng.uniform(1.0, 3.0)
    return _g("gh_exp", theta1), _g("gh_exp", theta1 * rng.uniform(1.0, 2.0))


def _log_convex_single(rng) -> GeneratorSpec:
    case = rng.integers(5)
    if case == 0:
        return _g("clayton", rng.uniform(0.1, 3.0))
    if case == 1:
        return _g("gh_exp", rng.uniform(1.0, 4.0))
    if case == 2:
        return _g("log_frac", rng.uniform(0.2, 4.0))
    if case == 3:
        return _g("log_pow", rng.uniform(0.2, 4.0))
    return _g("independence")


def _log_concave_single(rng) -> GeneratorSpec:
    case = rng.integers(5)
    if case == 0:
        return _g("independence")
    if case == 1:
        return _g("gh_exp", rng.uniform(0.2, 1.0))
    if case == 2:
        return _g("sech_pow", rng.uniform(0.2, 1.0))
    if case == 3:
        return _g("gumbel_frailty", rng.uniform(0.2, 1.0))
    return _g("amh_like", rng.uniform(-1.0, 0.0))


def _any_single(rng) -> GeneratorSpec:
    return _log_convex_single(rng) if rng.random() < 0.5 else _log_concave_single(rng)


def _superadditive_pairs(rng) -> GeneratorPair:
    case = rng.integers(3)
    if case == 0:
        return _remark_pairs(rng)
    if case == 1:
        a1 = rng.uniform(0.1, 2.0)
        return _g("clayton", a1), _g("clayton", a1 * rng.uniform(1.0, 2.0))
    g = _any_single(rng)
    return g, g


def _parallel_pairs(rng) -> GeneratorPair:
    case = rng.integers(4)
    if case == 0:
        theta1 = rng.uniform(0.2, 1.0)
        return _g("gh_exp", theta1), _g("gh_exp", theta1 * rng.uniform(0.5, 1.0))
    if case == 1:
        theta1 = rng.uniform(0.2, 0.5)
        return _g("gumbel_frailty", theta1), _g("gumbel_frailty", theta1 * rng.uniform(1.0, 2.0))
    if case == 2:
        return _g("independence"), _g("gumbel_frailty", rng.uniform(0.2, 1.0))
    return _g("independence"), _g("gh_exp", rng.uniform(0.2, 1.0))


def _hr_single(rng) -> GeneratorSpec:
    if rng.random() < 0.5:
        return _g("sech_pow", 1.0)
    return _g("amh_like", rng.uniform(-1.0, 0.0))


def _rhr_single(rng) -> GeneratorSpec:
    case = rng.integers(3)
    if case == 0:
        return _g("clayton", 0.2)
    return _hr_single(rng)


def _same(single: Callable[[np.random.Generator], GeneratorSpec]) -> PairSampler:
    def sampler(rng):
        g = single(rng)
        return g, g

    return sampler


# theorem id -> (generator pair sampler, vector relation)
_PLANS: Dict[str, Tuple[PairSampler, Callable]] = {
    "T3.1": (_remark_pairs, p_pair),
    "C3.1": (_same(_log_convex_single), p_pair),
    "T3.2": (_superadditive_pairs, w_pair),
    "C3.2": (_same(_any_single), w_pair),
    "T3.3": (_same(_hr_single), w_pair),
    "C3.3": (_same(_hr_single), w_pair),
    "T4.1": (_parallel_pairs, w_pair),
    "C4.1": (_same(_log_concave_single), w_pair),
    "T4.2": (_same(_rhr_single), w_pair),
    "T5.1": (_remark_pairs, p_pair),
    "C5.1": (_same(_log_convex_single), p_pair),
    "T5.2": (_superadditive_pairs, w_pair),
    "C5.2": (_same(_any_single), w_pair),
    "T5.3": (_same(_hr_single), w_pair),
}


def random_scenario(theorem_id: str, rng: np.random.Generator):
    """Models (and alpha_hat for C3.3) for one randomized run of ``theorem_id``."""
    spec = get_theorem(theorem_id)
    if spec.theorem_id not in _PLANS:
        raise CatalogError(f"no fuzz plan for {theorem_id!r}")
    pairs, vectors = _PLANS[spec.theorem_id]
    n = int(rng.integers(2, 5))
    baseline = random_baseline(rng)
    g1, g2 = pairs(rng)
    alpha, beta = vectors(rng, n)
    x = SystemModel(baseline, tuple(alpha), g1)

    if spec.constant_beta:
        alpha_hat = float(alpha.mean() * rng.uniform(1.0, 1.5))
        return [x], alpha_hat
    y = SystemModel(baseline, tuple(beta), g2)
    if spec.shocked:
        p, q = shock_pair(rng, n)
        return [ShockedSystem(x, tuple(p)), ShockedSystem(y, tuple(q))], None
    return [x, y], None


def fuzz_theorem(theorem_id: str, count: int, seed: int = 0) -> List[TheoremReport]:
    """Run ``count`` randomized scenarios through the harness."""
    rng = np.random.Generator(np.random.Philox(seed))
    reports = []
    for _ in range(count):
        models, alpha_hat = random_scenario(theorem_id, rng)
        reports.append(run_theorem(theorem_id, models, alpha_hat=alpha_hat))
    bad = sum(not r.consistent for r in reports)
    vacuous = sum(not r.hypotheses_hold for r in reports)
    logger.info("fuzz %s: %d runs, %d vacuous, %d inconsistent", theorem_id, count, vacuous, bad)
    return reports
