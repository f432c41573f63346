"""
Stochastic-order verdicts between two systems

A ≤_st B, A ≤_hr B and A ≤_rhr B are decided on a grid of abscissae for the
lifetime of either the series system (minimum) or the parallel system
(maximum). HR and RHR are checked twice, through monotonicity of the
survival (cdf) ratio and through the pointwise hazard (reversed hazard)
inequality; the verdict is INCONCLUSIVE when the two disagree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Union

import numpy as np

from ..copulas.checks import Verdict
from ..errors import ParameterError
from ..grids import GridSpec
from ..settings import get_settings
from ..systems import (
    ShockedSystem,
    SystemModel,
    parallel_cdf,
    parallel_hazard,
    parallel_reversed_hazard,
    parallel_survival,
    series_hazard,
    series_reversed_hazard,
    series_survival,
    shocked_series_hazard,
    shocked_series_survival,
)

logger = logging.getLogger(__name__)

Model = Union[SystemModel, ShockedSystem]
_TINY = 1e-300
MAX_WITNESSES = 10


class OrderKind(Enum):
    ST = "ST"
    HR = "HR"
    RHR = "RHR"


class Extreme(Enum):
    SERIES = "SERIES"
    PARALLEL = "PARALLEL"


@dataclass
class OrderVerdict:
    """Outcome of comparing A and B in one stochastic order."""

    order: OrderKind
    verdict: Verdict
    witnesses: List[List[float]] = field(default_factory=list)
    grid: str = ""
    tolerance: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.verdict is Verdict.FAILS and not self.witnesses:
            raise ValueError("a failing order verdict needs witnesses")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order.value,
            "verdict": self.verdict.value,
            "witnesses": self.witnesses,
            "grid": self.grid,
            "tolerance": self.tolerance,
            "note": self.note,
        }


class _Curves(NamedTuple):
    survival: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    hazard: Callable[[np.ndarray], np.ndarray]
    reversed_hazard: Callable[[np.ndarray], np.ndarray]


def _curves(model: Model, which: Extreme) -> _Curves:
    if isinstance(model, ShockedSystem):
        if which is Extreme.PARALLEL:
            raise ParameterError("shocked systems are compared through their series lifetime only")
        surv = lambda t: np.asarray(shocked_series_survival(model, t))
        haz = lambda t: np.asarray(shocked_series_hazard(model, t, errors="coerce"))

        def rev(t):
            s = surv(t)
            with np.errstate(all="ignore"):
                return haz(t) * s / (1.0 - s)

        return _Curves(surv, lambda t: 1.0 - surv(t), haz, rev)
    if which is Extreme.SERIES:
        return _Curves(
            lambda t: np.asarray(series_survival(model, t)),
            lambda t: 1.0 - np.asarray(series_survival(model, t)),
            lambda t: np.asarray(series_hazard(model, t, errors="coerce")),
            lambda t: np.asarray(series_reversed_hazard(model, t, errors="coerce")),
        )
    return _Curves(
        lambda t: np.asarray(parallel_survival(model, t)),
        lambda t: np.asarray(parallel_cdf(model, t)),
        lambda t: np.asarray(parallel_hazard(model, t, errors="coerce")),
        lambda t: np.asarray(parallel_reversed_hazard(model, t, errors="coerce")),
    )


def _system(model: Model) -> SystemModel:
    return model.system if isinstance(model, ShockedSystem) else model


def default_order_grid(*models: Model) -> GridSpec:
    """Log-spaced grid over the central 99.9% of the baselines involved."""
    settings = get_settings()
    mass = settings.order_tail_mass
    lo = min(float(_system(m).baseline.quantile(mass)) for m in models)
    hi = max(float(_system(m).baseline.quantile(1.0 - mass)) for m in models)
    return GridSpec(lo, hi, settings.order_grid_points)


def _witness_rows(t, lhs, rhs, violation, severity) -> List[List[float]]:
    idx = np.flatnonzero(violation)
    idx = idx[np.argsort(-severity[idx], kind="stable")][:MAX_WITNESSES]
    return [[float(t[i]), float(lhs[i]), float(rhs[i])] for i in sorted(idx)]


def _ratio_increasing(num: np.ndarray, den: np.ndarray, tol: float) -> np.ndarray:
    """Flags adjacent pairs where num/den drops by more than tol (relative)."""
    ratio = num / den
    drop = -np.diff(ratio) / (np.abs(ratio[:-1]) + np.abs(ratio[1:]) + _TINY)
    return drop > tol


def _check_st(t, ca: _Curves, cb: _Curves, tol, grid) -> OrderVerdict:
    sa, sb = ca.survival(t), cb.survival(t)
    fa, fb = ca.cdf(t), cb.cdf(t)
    usable = np.isfinite(sa) & np.isfinite(sb)
    if not np.any(usable):
        return OrderVerdict(OrderKind.ST, Verdict.INCONCLUSIVE, [], grid, tol, "no usable grid points")
    # scale by the smaller tail so both ends of the range are compared relatively
    scale = np.minimum(sa + sb, fa + fb) + _TINY
    stat = np.where(usable, (sa - sb) / scale, 0.0)
    violation = stat > tol
    if np.any(violation):
        return OrderVerdict(OrderKind.ST, Verdict.FAILS, _witness_rows(t, sa, sb, violation, stat), grid, tol)
    return OrderVerdict(OrderKind.ST, Verdict.HOLDS, [], grid, tol)


def _check_ratio_and_rates(kind, t, level_a, level_b, rate_a, rate_b, a_dominates: bool, tol, grid) -> OrderVerdict:
    """Shared HR/RHR logic.

    HR: level = survival, ratio level_b/level_a increasing, rate_a >= rate_b.
    RHR: level = cdf, ratio level_b/level_a increasing, rate_a <= rate_b.
    """
    floor = get_settings().saturation
    usable = (
        (level_a >= floor) & (level_b >= floor)
        & np.isfinite(rate_a) & np.isfinite(rate_b)
    )
    trimmed = int(np.size(t) - np.count_nonzero(usable))
    if trimmed:
        logger.debug("%s comparison trimmed %d of %d grid points", kind.value, trimmed, np.size(t))
    if np.count_nonzero(usable) < 2:
        return OrderVerdict(kind, Verdict.INCONCLUSIVE, [], grid, tol, "fewer than 2 usable grid points")
    t, level_a, level_b, rate_a, rate_b = (x[usable] for x in (t, level_a, level_b, rate_a, rate_b))

    ratio_bad = _ratio_increasing(level_b, level_a, tol)
    gap = (rate_b - rate_a) if a_dominates else (rate_a - rate_b)
    rate_stat = gap / (np.abs(rate_a) + np.abs(rate_b) + _TINY)
    rate_bad = rate_stat > tol

    if not np.any(ratio_bad) and not np.any(rate_bad):
        return OrderVerdict(kind, Verdict.HOLDS, [], grid, tol, f"{trimmed} points trimmed" if trimmed else "")
    if np.any(ratio_bad) and np.any(rate_bad):
        return OrderVerdict(kind, Verdict.FAILS, _witness_rows(t, rate_a, rate_b, rate_bad, rate_stat), grid, tol)
    which = "ratio" if np.any(ratio_bad) else "rate inequality"
    return OrderVerdict(kind, Verdict.INCONCLUSIVE, [], grid, tol, f"only the {which} formulation fails")


def check_order(
    model_a: Model,
    model_b: Model,
    order: OrderKind,
    which: Extreme,
    grid: Optional[GridSpec] = None,
) -> OrderVerdict:
    """Decide whether the ``which`` lifetime of A is smaller than B's in ``order``."""
    grid = grid or default_order_grid(model_a, model_b)
    tol = get_settings().order_tolerance
    t = grid.points()
    ca, cb = _curves(model_a, which), _curves(model_b, which)
    desc = grid.describe()

    if order is OrderKind.ST:
        return _check_st(t, ca, cb, tol, desc)
    if order is OrderKind.HR:
        return _check_ratio_and_rates(order, t, ca.survival(t), cb.survival(t), ca.hazard(t), cb.hazard(t), True, tol, desc)
    return _check_ratio_and_rates(order, t, ca.cdf(t), cb.cdf(t), ca.reversed_hazard(t), cb.reversed_hazard(t), False, tol, desc)
