"""
Baseline lifetimes and the proportional-odds transform

A PO component with odds ratio α has survival

    F̄_α(t) = α F̄(t) / (1 − (1 − α) F̄(t)) = α F̄ / (F + α F̄),

so its odds of survival F̄_α/F_α are α times the baseline odds. The second
form is what we evaluate: it keeps precision when F̄ is close to 1.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, Literal, Mapping, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import CatalogError, DomainError, ParameterError

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[float, np.ndarray]
Errors = Literal["raise", "coerce"]


def as_output(values: np.ndarray, scalar: bool) -> ArrayOrFloat:
    return float(values) if scalar else values


def guard_domain(values: np.ndarray, bad: np.ndarray, errors: Errors, message: str) -> np.ndarray:
    """Raise DomainError on ``bad`` points, or replace them with NaN when coercing."""
    if np.any(bad):
        if errors == "raise":
            raise DomainError(message)
        return np.where(bad, np.nan, values)
    return values


def _times(t: ArrayLike) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ParameterError("lifetimes are evaluated at t >= 0")
    return arr


class BaselineDist(ABC):
    """A continuous lifetime law on [0, ∞)."""

    family: str = ""

    @property
    @abstractmethod
    def params(self) -> Dict[str, float]:
        ...

    @abstractmethod
    def _survival(self, t: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _cdf(self, t: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _density(self, t: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _inverse_survival(self, s: np.ndarray) -> np.ndarray:
        ...

    def survival(self, t: ArrayLike) -> ArrayOrFloat:
        arr = _times(t)
        return as_output(self._survival(arr), arr.ndim == 0)

    def cdf(self, t: ArrayLike) -> ArrayOrFloat:
        arr = _times(t)
        return as_output(self._cdf(arr), arr.ndim == 0)

    def density(self, t: ArrayLike) -> ArrayOrFloat:
        arr = _times(t)
        return as_output(self._density(arr), arr.ndim == 0)

    def hazard(self, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
        arr = _times(t)
        surv = self._survival(arr)
        with np.errstate(all="ignore"):
            out = self._density(arr) / surv
        out = guard_domain(out, (surv <= 0) | ~np.isfinite(out), errors, f"{self.family}: hazard undefined where survival is 0")
        return as_output(out, arr.ndim == 0)

    def reversed_hazard(self, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
        arr = _times(t)
        cdf = self._cdf(arr)
        with np.errstate(all="ignore"):
            out = self._density(arr) / cdf
        out = guard_domain(out, (cdf <= 0) | ~np.isfinite(out), errors, f"{self.family}: reversed hazard undefined where cdf is 0")
        return as_output(out, arr.ndim == 0)

    def inverse_survival(self, s: ArrayLike) -> ArrayOrFloat:
        """Smallest t with survival(t) = s, for s in (0, 1]."""
        arr = np.asarray(s, dtype=float)
        if np.any(~(arr > 0)) or np.any(arr > 1):
            raise DomainError(f"{self.family}: inverse survival needs 0 < s <= 1")
        return as_output(self._inverse_survival(arr), arr.ndim == 0)

    def quantile(self, p: ArrayLike) -> ArrayOrFloat:
        arr = np.asarray(p, dtype=float)
        if np.any(~(arr >= 0)) or np.any(arr >= 1):
            raise DomainError(f"{self.family}: quantile needs 0 <= p < 1")
        return as_output(self._inverse_survival(1.0 - arr), arr.ndim == 0)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "params": self.params}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params})"


class Weibull(BaselineDist):
    """F̄(t) = exp(−(λt)^k) with λ = ``scale`` and k = ``shape``."""

    family = "weibull"

    def __init__(self, scale: float = 1.0, shape: float = 1.0):
        if not (scale > 0 and math.isfinite(scale)):
            raise ParameterError(f"weibull scale must be > 0, got {scale}")
        if not (shape > 0 and math.isfinite(shape)):
            raise ParameterError(f"weibull shape must be > 0, got {shape}")
        self.scale = float(scale)
        self.shape = float(shape)

    @property
    def params(self) -> Dict[str, float]:
        return {"scale": self.scale, "shape": self.shape}

    def _cumulative_hazard(self, t):
        return (self.scale * t) ** self.shape

    def _survival(self, t):
        return np.exp(-self._cumulative_hazard(t))

    def _cdf(self, t):
        return -np.expm1(-self._cumulative_hazard(t))

    def _density(self, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = self.shape * self.scale * (self.scale * t) ** (self.shape - 1.0)
        return rate * self._survival(t)

    def hazard(self, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
        arr = _times(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.shape * self.scale * (self.scale * arr) ** (self.shape - 1.0)
        out = guard_domain(out, ~np.isfinite(out), errors, "weibull: hazard is infinite at t = 0 for shape < 1")
        return as_output(out, arr.ndim == 0)

    def _inverse_survival(self, s):
        return (-np.log(s)) ** (1.0 / self.shape) / self.scale


class Exponential(Weibull):
    """F̄(t) = exp(−λt)."""

    family = "exponential"

    def __init__(self, rate: float = 1.0):
        super().__init__(scale=rate, shape=1.0)

    @property
    def params(self) -> Dict[str, float]:
        return {"rate": self.scale}


class Tabulated(BaselineDist):
    """Survival given at knots, joined by a monotone cubic (PCHIP) interpolant.

    Past the last knot the survival decays exponentially with the average
    hazard of the last segment (or stays 0 when the table ends at 0).
    """

    family = "tabulated"

    def __init__(self, times: Sequence[float], survival: Sequence[float]):
        t = np.asarray(times, dtype=float)
        s = np.asarray(survival, dtype=float)
        if t.ndim != 1 or t.shape != s.shape or t.size < 2:
            raise ParameterError("tabulated baseline needs matching times/survival of length >= 2")
        if t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ParameterError("tabulated times must start at 0 and increase strictly")
        if s[0] != 1.0 or np.any(np.diff(s) > 0) or np.any(s < 0):
            raise ParameterError("tabulated survival must start at 1 and be non-increasing in [0, 1]")
        if s[-1] > 0 and not s[-2] > s[-1]:
            raise ParameterError("tabulated survival must decrease over the last segment unless it ends at 0")
        self.times = t
        self.values = s
        self._interp = PchipInterpolator(t, s, extrapolate=False)
        self._slope = self._interp.derivative()
        self._tail_rate = 0.0 if s[-1] == 0 else math.log(s[-2] / s[-1]) / (t[-1] - t[-2])

    @property
    def params(self) -> Dict[str, Any]:
        return {"times": self.times.tolist(), "survival": self.values.tolist()}

    def _survival(self, t):
        inside = np.clip(self._interp(np.minimum(t, self.times[-1])), 0.0, 1.0)
        if self.values[-1] == 0:
            tail = np.zeros_like(t)
        else:
            tail = self.values[-1] * np.exp(-self._tail_rate * np.maximum(t - self.times[-1], 0.0))
        return np.where(t <= self.times[-1], inside, tail)

    def _cdf(self, t):
        return 1.0 - self._survival(t)

    def _density(self, t):
        inside = np.maximum(-self._slope(np.minimum(t, self.times[-1])), 0.0)
        return np.where(t <= self.times[-1], inside, self._tail_rate * self._survival(t))

    def _inverse_survival(self, s):
        flat = np.atleast_1d(s)
        out = np.empty_like(flat)
        for i, level in enumerate(flat):
            if level >= 1.0:
                out[i] = 0.0
            elif level >= self.values[-1]:
                out[i] = brentq(lambda x: float(self._survival(np.asarray(x))) - level, 0.0, self.times[-1], xtol=1e-14)
            elif self._tail_rate > 0:
                out[i] = self.times[-1] + math.log(self.values[-1] / level) / self._tail_rate
            else:
                out[i] = self.times[-1]
        return out.reshape(np.shape(s))


_BASELINES: Dict[str, Callable[..., BaselineDist]] = {
    "weibull": Weibull,
    "exponential": Exponential,
    "tabulated": Tabulated,
}


def make_baseline(family: str, params: Mapping[str, Any] = None) -> BaselineDist:
    factory = _BASELINES.get(family)
    if factory is None:
        raise CatalogError(f"unknown baseline family {family!r}; known: {', '.join(sorted(_BASELINES))}")
    try:
        return factory(**dict(params or {}))
    except TypeError as exc:
        raise ParameterError(f"{family}: bad parameters {sorted(params or {})}") from exc


def baseline_from_dict(data: Mapping[str, Any]) -> BaselineDist:
    return make_baseline(data["family"], data.get("params", {}))


@dataclass(frozen=True)
class POComponent:
    """A baseline lifetime whose survival odds are scaled by ``alpha``."""

    baseline: BaselineDist
    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ParameterError(f"odds ratio alpha must be > 0, got {self.alpha}")


def po_transform(survival: ArrayLike, alpha: float) -> ArrayOrFloat:
    """Apply the odds-ratio transform to survival values directly."""
    s = np.asarray(survival, dtype=float)
    out = alpha * s / ((1.0 - s) + alpha * s)
    return as_output(out, s.ndim == 0)


def _parts(c: POComponent, t: np.ndarray):
    surv = c.baseline._survival(t)
    cdf = c.baseline._cdf(t)
    return surv, cdf, cdf + c.alpha * surv


def po_survival(c: POComponent, t: ArrayLike) -> ArrayOrFloat:
    arr = _times(t)
    surv, _, denom = _parts(c, arr)
    return as_output(c.alpha * surv / denom, arr.ndim == 0)


def po_cdf(c: POComponent, t: ArrayLike) -> ArrayOrFloat:
    arr = _times(t)
    _, cdf, denom = _parts(c, arr)
    return as_output(cdf / denom, arr.ndim == 0)


def po_density(c: POComponent, t: ArrayLike) -> ArrayOrFloat:
    arr = _times(t)
    _, _, denom = _parts(c, arr)
    return as_output(c.alpha * c.baseline._density(arr) / denom ** 2, arr.ndim == 0)


def po_hazard(c: POComponent, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """r_α(t) = r(t) / (1 − (1 − α) F̄(t))."""
    arr = _times(t)
    surv, _, denom = _parts(c, arr)
    rate = np.asarray(c.baseline.hazard(arr, errors="coerce"))
    out = guard_domain(rate / denom, (surv <= 0) | ~np.isfinite(rate), errors, "po_hazard: survival is 0 or baseline hazard undefined")
    return as_output(out, arr.ndim == 0)


def po_reversed_hazard(c: POComponent, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """r̃_α(t) = α r̃(t) / (1 − (1 − α) F̄(t))."""
    arr = _times(t)
    _, cdf, denom = _parts(c, arr)
    rate = np.asarray(c.baseline.reversed_hazard(arr, errors="coerce"))
    out = guard_domain(c.alpha * rate / denom, (cdf <= 0) | ~np.isfinite(rate), errors, "po_reversed_hazard: cdf is 0")
    return as_output(out, arr.ndim == 0)


def po_inverse_survival(c: POComponent, u: ArrayLike) -> ArrayOrFloat:
    """The t with po_survival(c, t) = u, for u in (0, 1]."""
    arr = np.asarray(u, dtype=float)
    base_level = arr / (c.alpha + (1.0 - c.alpha) * arr)
    return c.baseline.inverse_survival(np.minimum(base_level, 1.0))
