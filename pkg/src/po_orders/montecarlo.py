"""
Monte Carlo oracle for system lifetimes

Uniforms U with joint cdf φ(Σ φ⁻¹(uᵢ)) are mapped to lifetimes in one of two
couplings. SURVIVAL sets Xᵢ = F̄_{αᵢ}⁻¹(Uᵢ), so the joint survival is
φ(Σ φ⁻¹(F̄_{αᵢ})) and the minimum follows the series law. CDF sets
Xᵢ = F_{αᵢ}⁻¹(Uᵢ), so the joint cdf is φ(Σ φ⁻¹(F_{αᵢ})) and the maximum
follows the parallel law. Three paths produce U:

- independence: plain uniforms
- clayton: Gamma frailty, Uᵢ = φ(Eᵢ/V) with V ~ Gamma(1/a, a)
- any other generator (n <= 4): the conditional method,
  φ^{(k−1)}(c + φ⁻¹(uₖ)) / φ^{(k−1)}(c) = w solved by bisection in log uₖ,
  with c carried as log c

Draws come in fixed-size blocks, each with its own Philox stream keyed by
(seed, block), so a batch does not depend on the worker count.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from .copulas.checks import Verdict, check_n_monotone
from .copulas.generators import GeneratorSpec
from .errors import ParameterError
from .lifetimes import ArrayOrFloat, as_output, po_inverse_survival
from .settings import get_settings
from .systems import ShockedSystem, SystemModel, parallel_cdf, series_survival, shocked_series_survival

logger = logging.getLogger(__name__)

Model = Union[SystemModel, ShockedSystem]

MAX_GENERIC_DIM = 4
# stream key for the shock indicators, disjoint from the block indices
_SHOCK_STREAM = 2**32 - 1


class Statistic(Enum):
    MIN = "MIN"
    MAX = "MAX"


class Coupling(Enum):
    SURVIVAL = "SURVIVAL"
    CDF = "CDF"


# the statistic each coupling reproduces analytically
_COUPLING_FOR = {Statistic.MIN: Coupling.SURVIVAL, Statistic.MAX: Coupling.CDF}


@dataclass
class SampleBatch:
    """Rows are samples, columns are component lifetimes."""

    draws: np.ndarray
    seed: int
    model: Model
    coupling: Coupling = Coupling.SURVIVAL

    def __post_init__(self):
        if self.draws.ndim != 2 or self.draws.shape[0] == 0:
            raise ParameterError("a batch needs a non-empty 2-D draw matrix")
        if np.any(self.draws < 0):
            raise ParameterError("lifetimes must be >= 0")

    @property
    def size(self) -> int:
        return self.draws.shape[0]

    @property
    def n(self) -> int:
        return self.draws.shape[1]


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _open_uniforms(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms on (0, 1]."""
    return 1.0 - rng.random(shape)


def _independent_uniforms(g: GeneratorSpec, rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    return _open_uniforms(rng, (size, n))


def _clayton_uniforms(g: GeneratorSpec, rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    a = g.theta
    frailty = rng.gamma(shape=1.0 / a, scale=a, size=(size, 1))
    exps = rng.standard_exponential((size, n))
    return np.asarray(g.phi(exps / frailty))


def _solve_conditional(g: GeneratorSpec, order: int, log_offset: np.ndarray, w: np.ndarray) -> np.ndarray:
    """uₖ with φ^{(order)}(c + φ⁻¹(uₖ)) / φ^{(order)}(c) = w, vectorised; c = e^log_offset.

    The ratio is compared on the log scale and the bisection runs in log uₖ,
    so neither c nor φ⁻¹(uₖ) has to be finite as a float.
    """
    settings = get_settings()
    log_denom = np.asarray(g.log_abs_derivative(log_offset, order))
    out = w.copy()
    live = np.isfinite(log_denom)
    if not np.all(live):
        logger.debug("conditional sampler: %d rows fell back to independence", np.count_nonzero(~live))
    if not np.any(live):
        return out

    lc, log_target, d = log_offset[live], np.log(w[live]), log_denom[live]
    lo = np.full(lc.shape, np.log(settings.bisect_lo))
    hi = np.zeros(lc.shape)
    for _ in range(settings.bisect_max_iter):
        mid = 0.5 * (lo + hi)
        log_s = np.logaddexp(lc, g._log_phi_inv_raw(np.exp(mid)))
        below = np.asarray(g.log_abs_derivative(log_s, order)) - d < log_target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo) < settings.bisect_tol:
            break
    out[live] = np.exp(0.5 * (lo + hi))
    return out


def _conditional_uniforms(g: GeneratorSpec, rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    w = _open_uniforms(rng, (size, n))
    u = np.empty((size, n))
    u[:, 0] = w[:, 0]
    log_offset = g._log_phi_inv_raw(u[:, 0])
    for k in range(1, n):
        u[:, k] = _solve_conditional(g, k, log_offset, w[:, k])
        log_offset = np.logaddexp(log_offset, g._log_phi_inv_raw(u[:, k]))
    return u


UniformSampler = Callable[[GeneratorSpec, np.random.Generator, int, int], np.ndarray]

_FAST_PATHS: Dict[str, UniformSampler] = {
    "independence": _independent_uniforms,
    "clayton": _clayton_uniforms,
}


def _uniform_sampler(m: SystemModel) -> UniformSampler:
    fast = _FAST_PATHS.get(m.generator.name)
    if fast is not None:
        return fast
    if m.n > MAX_GENERIC_DIM:
        raise ParameterError(f"the conditional sampler handles n <= {MAX_GENERIC_DIM}, got n = {m.n}")
    report = check_n_monotone(m.generator, m.n)
    if report.verdict is Verdict.FAILS:
        logger.warning("%s is not %d-monotone; samples do not follow a copula", m.generator.name, m.n)
    return _conditional_uniforms


def sample(
    m: SystemModel,
    size: int,
    seed: int,
    workers: Optional[int] = None,
    coupling: Coupling = Coupling.SURVIVAL,
) -> SampleBatch:
    """Draw ``size`` lifetime vectors of ``m``; identical (m, size, seed, coupling) give identical draws."""
    if size < 1:
        raise ParameterError(f"sample size must be >= 1, got {size}")
    settings = get_settings()
    sampler = _uniform_sampler(m)
    block = settings.mc_block_size
    starts = list(range(0, size, block))

    def run_block(index: int) -> np.ndarray:
        rows = min(block, size - starts[index])
        u = sampler(m.generator, _block_rng(seed, index), rows, m.n)
        if coupling is Coupling.CDF:
            u = 1.0 - u
        u = np.clip(u, np.finfo(float).tiny, 1.0)
        return np.column_stack([po_inverse_survival(c, u[:, i]) for i, c in enumerate(m.components())])

    with ThreadPoolExecutor(max_workers=workers or settings.mc_workers) as pool:
        blocks = list(pool.map(run_block, range(len(starts))))
    logger.debug("sampled %d x %d draws for %s in %d blocks", size, m.n, m.generator.name, len(starts))
    return SampleBatch(np.vstack(blocks), seed, m, coupling)


def sample_shocked(s: ShockedSystem, size: int, seed: int, workers: Optional[int] = None) -> SampleBatch:
    """Sample the system, then zero each lifetime with probability 1 − pᵢ."""
    batch = sample(s.system, size, seed, workers)
    alive = _block_rng(seed, _SHOCK_STREAM).random((size, s.system.n)) < np.asarray(s.probs)
    return SampleBatch(batch.draws * alive, seed, s)


def empirical_survival(batch: SampleBatch, statistic: Statistic, t: ArrayLike) -> ArrayOrFloat:
    """MIN: fraction of rows with min > t. MAX: fraction of rows with max <= t."""
    arr = np.asarray(t, dtype=float)
    flat = np.atleast_1d(arr)
    if statistic is Statistic.MIN:
        ext = batch.draws.min(axis=1)
        out = (ext[:, None] > flat[None, :]).mean(axis=0)
    else:
        ext = batch.draws.max(axis=1)
        out = (ext[:, None] <= flat[None, :]).mean(axis=0)
    return as_output(out if arr.ndim else out[0], arr.ndim == 0)


def analytic_curve(model: Model, statistic: Statistic) -> Callable[[np.ndarray], np.ndarray]:
    """The law that ``empirical_survival`` estimates on a batch drawn with the matching coupling."""
    if isinstance(model, ShockedSystem):
        if statistic is Statistic.MAX:
            raise ParameterError("shocked systems are validated through the series lifetime only")
        return lambda t: np.asarray(shocked_series_survival(model, t))
    if statistic is Statistic.MIN:
        return lambda t: np.asarray(series_survival(model, t))
    return lambda t: np.asarray(parallel_cdf(model, t))


@dataclass
class AgreementReport:
    statistic: Statistic
    size: int
    n_sigma: float
    rows: List[List[float]] = field(default_factory=list)  # t, empirical, analytic, stderr

    @property
    def verdict(self) -> Verdict:
        for _, emp, ana, se in self.rows:
            if abs(emp - ana) > self.n_sigma * se + 1e-12:
                return Verdict.FAILS
        return Verdict.HOLDS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "statistic": self.statistic.value,
            "size": self.size,
            "n_sigma": self.n_sigma,
            "rows": self.rows,
            "verdict": self.verdict.value,
        }


def agreement_times(model: Model, probs: Sequence[float] = (0.1, 0.3, 0.5, 0.7, 0.9)) -> np.ndarray:
    system = model.system if isinstance(model, ShockedSystem) else model
    return np.asarray(system.baseline.quantile(np.asarray(probs)))


def mc_agreement(
    batch: SampleBatch,
    statistic: Statistic,
    ts: Optional[ArrayLike] = None,
    n_sigma: float = 3.0,
    curve: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> AgreementReport:
    """Compare empirical and analytic values at ``ts`` in binomial standard errors."""
    ts = agreement_times(batch.model) if ts is None else np.atleast_1d(np.asarray(ts, dtype=float))
    if curve is None:
        if batch.coupling is not _COUPLING_FOR[statistic]:
            raise ParameterError(
                f"{statistic.value} agreement needs a {_COUPLING_FOR[statistic].value} coupled batch, got {batch.coupling.value}"
            )
        curve = analytic_curve(batch.model, statistic)
    empirical = np.atleast_1d(empirical_survival(batch, statistic, ts))
    analytic = np.atleast_1d(curve(ts))
    stderr = np.sqrt(analytic * (1.0 - analytic) / batch.size)
    rows = [[float(t), float(e), float(a), float(s)] for t, e, a, s in zip(ts, empirical, analytic, stderr)]
    report = AgreementReport(statistic, batch.size, n_sigma, rows)
    if report.verdict is Verdict.FAILS:
        logger.info("MC disagreement for %s: %s", statistic.value, rows)
    return report


def empirical_kendall_tau(batch: SampleBatch) -> float:
    """Mean pairwise Kendall's tau over component columns."""
    taus = []
    for i in range(batch.n):
        for j in range(i + 1, batch.n):
            tau, _ = stats.kendalltau(batch.draws[:, i], batch.draws[:, j])
            taus.append(tau)
    return float(np.mean(taus))


def write_batch_csv(batch: SampleBatch, path: Union[str, Path]) -> Path:
    """Write draws with header x1..xn, fixed significant digits and \\n line endings."""
    path = Path(path)
    digits = get_settings().csv_digits
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(batch.n)])
        for row in batch.draws:
            writer.writerow([format(float(v), f".{digits}g") for v in row])
    return path
