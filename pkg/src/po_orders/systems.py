"""
Series and parallel systems of dependent PO components

Component lifetimes X₁..Xₙ have PO marginals F̄_{αᵢ} coupled by the
Archimedean survival copula of φ, so

    P(X₁:ₙ > t) = φ(Σ φ⁻¹(F̄_{αᵢ}(t)))      (series survival)
    P(Xₙ:ₙ ≤ t) = φ(Σ φ⁻¹(F_{αᵢ}(t)))       (parallel cdf)

Hazards follow by differentiating through φ⁻¹′(u) = 1/φ′(φ⁻¹(u)):

    r₁:ₙ = r · φ′(s)/φ(s) · Σ φ⁻¹′(F̄_{αᵢ}) F̄_{αᵢ} / (1 − ᾱᵢF̄)
    r̃ₙ:ₙ = r̃ · φ′(s)/φ(s) · Σ φ⁻¹′(F_{αᵢ}) αᵢF_{αᵢ} / (1 − ᾱᵢF̄)

The factor αᵢF_{αᵢ}/(1 − ᾱᵢF̄) equals (d/dt F_{αᵢ}) / r̃ since
d/dt F_α = α f / (1 − ᾱF̄)².
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import logsumexp

from .copulas.generators import GeneratorSpec, make_generator
from .errors import DomainError, ParameterError
from .lifetimes import (
    ArrayOrFloat,
    BaselineDist,
    Errors,
    POComponent,
    _times,
    as_output,
    baseline_from_dict,
    guard_domain,
)
from .settings import get_settings

logger = logging.getLogger(__name__)

SPEC_VERSION = 1


@dataclass(frozen=True)
class SystemModel:
    """Baseline, odds ratios and generator: X ~ PO(F̄, α, φ)."""

    baseline: BaselineDist
    alphas: Tuple[float, ...]
    generator: GeneratorSpec

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if len(alphas) < 2:
            raise ParameterError(f"a system needs n >= 2 components, got {len(alphas)}")
        if not all(a > 0 and math.isfinite(a) for a in alphas):
            raise ParameterError(f"odds ratios must be > 0, got {alphas}")

    @property
    def n(self) -> int:
        return len(self.alphas)

    def components(self) -> Tuple[POComponent, ...]:
        return tuple(POComponent(self.baseline, a) for a in self.alphas)

    def with_alphas(self, alphas: Sequence[float]) -> "SystemModel":
        return SystemModel(self.baseline, tuple(alphas), self.generator)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "baseline": self.baseline.to_dict(),
            "alphas": list(self.alphas),
            "generator": self.generator.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SystemModel":
        return cls(
            baseline_from_dict(data["baseline"]),
            tuple(data["alphas"]),
            make_generator(data["generator"]["name"], data["generator"].get("params", {})),
        )


@dataclass(frozen=True)
class ShockedSystem:
    """A system whose i-th lifetime is zeroed by an independent shock with probability 1 − pᵢ."""

    system: SystemModel
    probs: Tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) != self.system.n:
            raise ParameterError(f"need {self.system.n} shock probabilities, got {len(probs)}")
        if not all(0.0 < p <= 1.0 for p in probs):
            raise ParameterError(f"shock probabilities must lie in (0, 1], got {probs}")

    @property
    def survival_mass(self) -> float:
        return math.prod(self.probs)

    def to_dict(self) -> Dict[str, Any]:
        return {**self.system.to_dict(), "probs": list(self.probs)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ShockedSystem":
        return cls(SystemModel.from_dict(data), tuple(data["probs"]))


class _Marginals(NamedTuple):
    surv: np.ndarray        # baseline F̄, shape (T,)
    cdf: np.ndarray         # baseline F, shape (T,)
    denom: np.ndarray       # 1 − ᾱᵢF̄ = F + αᵢF̄, shape (n, T)
    po_surv: np.ndarray     # F̄_{αᵢ}, shape (n, T)
    po_cdf: np.ndarray      # F_{αᵢ}, shape (n, T)


def _marginals(m: SystemModel, t: np.ndarray) -> _Marginals:
    flat = np.atleast_1d(t)
    surv = m.baseline._survival(flat)
    cdf = m.baseline._cdf(flat)
    alphas = np.asarray(m.alphas)[:, None]
    denom = cdf[None, :] + alphas * surv[None, :]
    return _Marginals(surv, cdf, denom, alphas * surv[None, :] / denom, cdf[None, :] / denom)


def _log_inner(g: GeneratorSpec, levels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """log φ⁻¹(levelᵢ) per component and log s with s = Σ φ⁻¹(levelᵢ); any zero level gives log s = +inf."""
    blocked = np.any(levels <= 0.0, axis=0)
    log_terms = g._log_phi_inv_raw(np.where(levels > 0.0, levels, 1.0))
    with np.errstate(all="ignore"):
        log_s = logsumexp(log_terms, axis=0)
    blocked = blocked | np.any(np.isposinf(log_terms), axis=0)
    return log_terms, np.where(blocked, np.inf, log_s)


def _extreme_law(g: GeneratorSpec, levels: np.ndarray) -> np.ndarray:
    """φ(Σ φ⁻¹(levels)), summed on the log scale."""
    _, log_s = _log_inner(g, levels)
    return np.asarray(g.phi_at_log(log_s))


def _reshape(values: np.ndarray, t: np.ndarray) -> ArrayOrFloat:
    return as_output(values.reshape(np.shape(t)), np.ndim(t) == 0)


def series_survival(m: SystemModel, t: ArrayLike) -> ArrayOrFloat:
    """S₁(t) = φ(Σ φ⁻¹(F̄_{αᵢ}(t))), the survival of the series system."""
    arr = _times(t)
    value = _extreme_law(m.generator, _marginals(m, arr).po_surv)
    return _reshape(value, arr)


def parallel_cdf(m: SystemModel, t: ArrayLike) -> ArrayOrFloat:
    """S₂(t) = φ(Σ φ⁻¹(F_{αᵢ}(t))), the cdf of the parallel system."""
    arr = _times(t)
    value = _extreme_law(m.generator, _marginals(m, arr).po_cdf)
    return _reshape(value, arr)


def series_cdf(m: SystemModel, t: ArrayLike) -> ArrayOrFloat:
    arr = _times(t)
    return _reshape(1.0 - np.atleast_1d(series_survival(m, arr)), arr)


def parallel_survival(m: SystemModel, t: ArrayLike) -> ArrayOrFloat:
    arr = _times(t)
    return _reshape(1.0 - np.atleast_1d(parallel_cdf(m, arr)), arr)


def _log_derivative_sum(g: GeneratorSpec, levels: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """φ′(s)/φ(s) · Σ wᵢ / φ′(φ⁻¹(levelᵢ)) with s = Σ φ⁻¹(levelᵢ)."""
    log_terms, log_s = _log_inner(g, levels)
    scale = np.asarray(g.log_abs_derivative(log_s, 1)) - np.asarray(g.log_abs_derivative(log_s, 0))
    with np.errstate(all="ignore"):
        ratios = np.exp(scale[None, :] - np.asarray(g.log_abs_derivative(log_terms, 1)))
        return np.sum(np.where(weights > 0.0, weights * ratios, 0.0), axis=0)


def series_hazard(m: SystemModel, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """Hazard rate of the series system lifetime X₁:ₙ."""
    arr = _times(t)
    flat = np.atleast_1d(arr)
    parts = _marginals(m, flat)
    rate = np.asarray(m.baseline.hazard(flat, errors="coerce"))
    survival = _extreme_law(m.generator, parts.po_surv)
    total = _log_derivative_sum(m.generator, parts.po_surv, parts.po_surv / parts.denom)
    out = rate * total
    bad = (survival < get_settings().saturation) | ~np.isfinite(out)
    out = guard_domain(out, bad, errors, "series_hazard: survival below saturation or baseline hazard undefined")
    return _reshape(out, arr)


def parallel_reversed_hazard(m: SystemModel, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """Reversed hazard rate of the parallel system lifetime Xₙ:ₙ."""
    arr = _times(t)
    flat = np.atleast_1d(arr)
    parts = _marginals(m, flat)
    rate = np.asarray(m.baseline.reversed_hazard(flat, errors="coerce"))
    cdf = _extreme_law(m.generator, parts.po_cdf)
    alphas = np.asarray(m.alphas)[:, None]
    total = _log_derivative_sum(m.generator, parts.po_cdf, alphas * parts.po_cdf / parts.denom)
    out = rate * total
    bad = (cdf < get_settings().saturation) | ~np.isfinite(out)
    out = guard_domain(out, bad, errors, "parallel_reversed_hazard: cdf below saturation or baseline reversed hazard undefined")
    return _reshape(out, arr)


def series_reversed_hazard(m: SystemModel, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """Reversed hazard of X₁:ₙ, r₁:ₙ S₁ / (1 − S₁)."""
    arr = _times(t)
    flat = np.atleast_1d(arr)
    survival = np.atleast_1d(series_survival(m, flat))
    hazard = np.atleast_1d(series_hazard(m, flat, errors="coerce"))
    cdf = 1.0 - survival
    with np.errstate(all="ignore"):
        out = hazard * survival / cdf
    out = guard_domain(out, (cdf < get_settings().saturation) | ~np.isfinite(out), errors, "series_reversed_hazard: cdf below saturation")
    return _reshape(out, arr)


def parallel_hazard(m: SystemModel, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """Hazard of Xₙ:ₙ, r̃ₙ:ₙ S₂ / (1 − S₂)."""
    arr = _times(t)
    flat = np.atleast_1d(arr)
    cdf = np.atleast_1d(parallel_cdf(m, flat))
    rev = np.atleast_1d(parallel_reversed_hazard(m, flat, errors="coerce"))
    survival = 1.0 - cdf
    with np.errstate(all="ignore"):
        out = rev * cdf / survival
    out = guard_domain(out, (survival < get_settings().saturation) | ~np.isfinite(out), errors, "parallel_hazard: survival below saturation")
    return _reshape(out, arr)


def i1_statistic(g: GeneratorSpec, u: ArrayLike) -> ArrayOrFloat:
    """I₁(u) = φ′(Σuᵢ)/φ(Σuᵢ) · Σ φ(uᵢ)(1 − φ(uᵢ))/φ′(uᵢ).

    Components run along axis 0; extra axes are evaluated elementwise.
    """
    arr = np.asarray(u, dtype=float)
    if arr.ndim == 0 or arr.shape[0] < 1:
        raise ParameterError("i1_statistic needs a vector of arguments")
    if np.any(~(arr >= 0)):
        raise DomainError("i1_statistic needs u >= 0")
    s = arr.sum(axis=0)
    phi_s = np.asarray(g.derivative(s, 0))
    slopes = np.asarray(g.phi_prime(arr))
    if np.any(phi_s <= 0):
        raise DomainError("i1_statistic: phi(sum u) underflows")
    if np.any(slopes == 0):
        raise DomainError("i1_statistic: phi' vanishes at an argument")
    log_phi = np.asarray(g.log_phi(arr))
    terms = np.exp(log_phi) * -np.expm1(log_phi) / slopes
    out = np.asarray(g.phi_prime(s)) / phi_s * terms.sum(axis=0)
    return as_output(np.asarray(out), np.ndim(out) == 0)


def shocked_series_survival(s: ShockedSystem, t: ArrayLike) -> ArrayOrFloat:
    """P(X*₁:ₙ > t) = Πpᵢ · S₁(t); at t = 0 this is the right limit Πpᵢ."""
    arr = _times(t)
    return _reshape(s.survival_mass * np.atleast_1d(series_survival(s.system, arr)), arr)


def shocked_series_hazard(s: ShockedSystem, t: ArrayLike, errors: Errors = "raise") -> ArrayOrFloat:
    """Hazard of X*₁:ₙ on t > 0; the atom at 0 leaves it equal to the unshocked hazard."""
    arr = _times(t)
    out = np.atleast_1d(series_hazard(s.system, arr, errors="coerce")).astype(float)
    out = guard_domain(out, (np.atleast_1d(arr) == 0) | np.isnan(out), errors, "shocked_series_hazard: defined for t > 0 below saturation")
    return _reshape(out, arr)


def model_from_dict(data: Mapping[str, Any]):
    """A ShockedSystem when ``probs`` is present, else a SystemModel."""
    if data.get("probs") is not None:
        return ShockedSystem.from_dict(data)
    return SystemModel.from_dict(data)
