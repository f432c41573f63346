"""
Archimedean generators

A generator φ: [0, ∞) → [0, 1] with φ(0) = 1, strictly decreasing to 0,
defines the survival copula C(u) = φ(Σ φ⁻¹(uᵢ)). Every catalog family ships
closed forms for log φ, φ′, φ″ and φ⁻¹; families registered later may omit
φ″, which is then taken by central differences of φ′.

All closed forms are written with log1p/expm1 so that values near t = 0
(φ ≈ 1) and near u = 1 keep full relative precision.

Slowly decaying families (log_frac, log_pow) reach φ⁻¹(u) beyond float range
at moderate u, so the system laws and the sampler work with lt = log t:
log_phi_inv gives log φ⁻¹(u) and log_abs_derivative gives log|φ^{(k)}(e^lt)|,
both in closed form where the family provides them.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import expit

from ..errors import CatalogError, DomainError, ParameterError
from ..settings import get_settings

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[float, np.ndarray]

PARAM_ALIASES = ("theta", "a", "eta")
_LN2 = math.log(2.0)


def _as_output(values: np.ndarray, scalar: bool) -> ArrayOrFloat:
    return float(values) if scalar else values


def _log_expm1(y: np.ndarray) -> np.ndarray:
    """log(e^y − 1) for y >= 0 without overflow."""
    y = np.asarray(y, dtype=float)
    small = np.log(np.expm1(np.minimum(y, 30.0)))
    large = y + np.log1p(-np.exp(-np.maximum(y, 30.0)))
    return np.where(y <= 30.0, small, large)


class GeneratorFamily(ABC):
    """One parametric family of generators. Methods are vectorised over t (or u)."""

    name: str = ""
    param: Optional[str] = "theta"
    formula: str = ""

    def validate(self, theta: Optional[float]) -> None:
        if self.param is not None and (theta is None or not math.isfinite(theta) or theta <= 0):
            raise ParameterError(f"{self.name}: {self.param} must be > 0, got {theta}")

    @abstractmethod
    def log_phi(self, t: np.ndarray, theta: Optional[float]) -> np.ndarray:
        ...

    @abstractmethod
    def phi_prime(self, t: np.ndarray, theta: Optional[float]) -> np.ndarray:
        ...

    def phi_second(self, t: np.ndarray, theta: Optional[float]) -> Optional[np.ndarray]:
        return None

    @abstractmethod
    def phi_inv(self, u: np.ndarray, theta: Optional[float]) -> np.ndarray:
        ...

    def log_phi_inv(self, u: np.ndarray, theta: Optional[float]) -> np.ndarray:
        return np.log(self.phi_inv(u, theta))

    def log_abs_derivative(self, lt: np.ndarray, order: int, theta: Optional[float]) -> Optional[np.ndarray]:
        """log|φ^{(order)}(e^lt)| in closed form, or None to fall back on the t scale."""
        return None


class Independence(GeneratorFamily):
    name = "independence"
    param = None
    formula = "exp(-t)"

    def log_phi(self, t, theta):
        return -t

    def phi_prime(self, t, theta):
        return -np.exp(-t)

    def phi_second(self, t, theta):
        return np.exp(-t)

    def phi_inv(self, u, theta):
        return -np.log(u)


class GhExp(GeneratorFamily):
    name = "gh_exp"
    formula = "exp(1 - (1+t)^(1/theta))"

    def log_phi(self, t, theta):
        return -np.expm1(np.log1p(t) / theta)

    def phi_prime(self, t, theta):
        lp = np.log1p(t)
        return -np.exp((1.0 / theta - 1.0) * lp + self.log_phi(t, theta)) / theta

    def phi_second(self, t, theta):
        lp = np.log1p(t)
        lphi = self.log_phi(t, theta)
        k = 1.0 / theta
        return np.exp((2.0 * k - 2.0) * lp + lphi) * k * k - k * (k - 1.0) * np.exp((k - 2.0) * lp + lphi)

    def phi_inv(self, u, theta):
        return np.expm1(theta * np.log1p(-np.log(u)))


class LogFrac(GeneratorFamily):
    name = "log_frac"
    formula = "theta / log(e^theta + t)"

    def _ell(self, t, theta):
        return theta + np.log1p(t * math.exp(-theta))

    def log_phi(self, t, theta):
        return -np.log1p(np.log1p(t * math.exp(-theta)) / theta)

    def phi_prime(self, t, theta):
        ell = self._ell(t, theta)
        return -theta / ((math.exp(theta) + t) * ell * ell)

    def phi_second(self, t, theta):
        ell = self._ell(t, theta)
        big = math.exp(theta) + t
        return theta * (ell + 2.0) / (big * big * ell ** 3)

    def phi_inv(self, u, theta):
        return math.exp(theta) * np.expm1(theta * (1.0 - u) / u)

    def log_phi_inv(self, u, theta):
        return theta + _log_expm1(theta * (1.0 - u) / u)

    def log_abs_derivative(self, lt, order, theta):
        # with x = e^theta + t and ell = log x: |phi^(m)| = theta P_m(ell) / (x^m ell^(m+1))
        ell = np.logaddexp(theta, lt)
        poly = {0: 1.0, 1: 1.0, 2: ell + 2.0, 3: 2.0 * ell * ell + 6.0 * ell + 6.0}.get(order)
        if poly is None:
            return None
        return math.log(theta) - order * ell - (order + 1) * np.log(ell) + np.log(poly)


class LogPow(GeneratorFamily):
    name = "log_pow"
    formula = "log(e + t)^(-1/theta)"

    def _ell(self, t):
        return 1.0 + np.log1p(t / math.e)

    def log_phi(self, t, theta):
        return -np.log1p(np.log1p(t / math.e)) / theta

    def phi_prime(self, t, theta):
        ell = self._ell(t)
        return -np.exp(-(1.0 / theta + 1.0) * np.log(ell)) / (theta * (math.e + t))

    def phi_second(self, t, theta):
        ell = self._ell(t)
        k = 1.0 / theta
        return k * np.exp(-(k + 2.0) * np.log(ell)) * (k + 1.0 + ell) / (math.e + t) ** 2

    def phi_inv(self, u, theta):
        return math.e * np.expm1(np.expm1(-theta * np.log(u)))

    def log_phi_inv(self, u, theta):
        return 1.0 + _log_expm1(np.expm1(-theta * np.log(u)))

    def log_abs_derivative(self, lt, order, theta):
        # with x = e + t, ell = log x, k = 1/theta: |phi^(m)| = k P_m(ell) / (x^m ell^(k+m)), m >= 1
        ell = np.logaddexp(1.0, lt)
        k = 1.0 / theta
        if order == 0:
            return -k * np.log(ell)
        poly = {1: 1.0, 2: k + 1.0 + ell, 3: 2.0 * ell * ell + 3.0 * (k + 1.0) * ell + (k + 1.0) * (k + 2.0)}.get(order)
        if poly is None:
            return None
        return math.log(k) - order * ell - (k + order) * np.log(ell) + np.log(poly)


class SechPow(GeneratorFamily):
    name = "sech_pow"
    formula = "(2 / (1 + e^t))^(1/theta)"

    @staticmethod
    def _log_half_one_plus_exp(t):
        # log((1 + e^t) / 2), accurate near 0 and free of overflow for large t
        small = np.log1p(np.expm1(np.minimum(t, 30.0)) / 2.0)
        large = t - _LN2 + np.log1p(np.exp(-np.maximum(t, 30.0)))
        return np.where(t <= 30.0, small, large)

    def log_phi(self, t, theta):
        return -self._log_half_one_plus_exp(t) / theta

    def phi_prime(self, t, theta):
        return -expit(t) / theta * np.exp(self.log_phi(t, theta))

    def phi_second(self, t, theta):
        s = expit(t)
        return np.exp(self.log_phi(t, theta)) * (s * s / theta ** 2 - s * (1.0 - s) / theta)

    def phi_inv(self, u, theta):
        # log(2e^x − 1) = x + log 2 + log1p(−e^(−x)/2) once e^x is large
        x = -theta * np.log(u)
        small = np.log1p(2.0 * np.expm1(np.minimum(x, 30.0)))
        large = x + _LN2 + np.log1p(-0.5 * np.exp(-np.maximum(x, 30.0)))
        return np.where(x <= 30.0, small, large)


class GumbelFrailty(GeneratorFamily):
    name = "gumbel_frailty"
    formula = "exp((1 - e^t) / theta)"

    def log_phi(self, t, theta):
        return -np.expm1(t) / theta

    def phi_prime(self, t, theta):
        return -np.exp(t + self.log_phi(t, theta)) / theta

    def phi_second(self, t, theta):
        lphi = self.log_phi(t, theta)
        return np.exp(2.0 * t + lphi) / theta ** 2 - np.exp(t + lphi) / theta

    def phi_inv(self, u, theta):
        return np.log1p(-theta * np.log(u))


class Clayton(GeneratorFamily):
    name = "clayton"
    param = "a"
    formula = "(1 + a t)^(-1/a)"

    def log_phi(self, t, a):
        return -np.log1p(a * t) / a

    def phi_prime(self, t, a):
        return -np.exp(-(1.0 / a + 1.0) * np.log1p(a * t))

    def phi_second(self, t, a):
        return (1.0 + a) * np.exp(-(1.0 / a + 2.0) * np.log1p(a * t))

    def phi_inv(self, u, a):
        return np.expm1(-a * np.log(u)) / a

    def log_phi_inv(self, u, a):
        return _log_expm1(-a * np.log(u)) - math.log(a)

    def log_abs_derivative(self, lt, order, a):
        # |phi^(m)| = prod_{j<m}(1 + j a) (1 + a t)^(-1/a - m)
        log1p_at = np.logaddexp(0.0, math.log(a) + lt)
        rising = sum(math.log1p(j * a) for j in range(order))
        return rising - (1.0 / a + order) * log1p_at


class AmhLike(GeneratorFamily):
    """(θ−1)/(θ−e^t), evaluated as (1−θ)e^{−t}/(1−θe^{−t})."""

    name = "amh_like"
    formula = "(theta - 1) / (theta - e^t)"

    def validate(self, theta):
        if theta is None or not (-1.0 <= theta <= 0.0):
            raise ParameterError(f"{self.name}: theta must lie in [-1, 0], got {theta}")

    def log_phi(self, t, theta):
        return -np.log1p(np.expm1(t) / (1.0 - theta))

    def phi_prime(self, t, theta):
        e = np.exp(-t)
        return -(1.0 - theta) * e / (1.0 - theta * e) ** 2

    def phi_second(self, t, theta):
        e = np.exp(-t)
        return (1.0 - theta) * e * (1.0 + theta * e) / (1.0 - theta * e) ** 3

    def phi_inv(self, u, theta):
        return np.log1p((1.0 - theta) * (1.0 - u) / u)


_CATALOG: Dict[str, GeneratorFamily] = {}


def register_generator(family: GeneratorFamily, replace: bool = False) -> None:
    """Add a generator family to the catalog (the programmatic extension hook)."""
    if not family.name:
        raise ParameterError("generator family needs a name")
    if family.name in _CATALOG and not replace:
        raise ParameterError(f"generator {family.name!r} is already registered")
    _CATALOG[family.name] = family
    logger.debug("Registered generator family %s", family.name)


for _family in (Independence(), GhExp(), LogFrac(), LogPow(), SechPow(), GumbelFrailty(), Clayton(), AmhLike()):
    register_generator(_family)


def list_generators() -> List[str]:
    return sorted(_CATALOG)


@dataclass(frozen=True)
class GeneratorSpec:
    """An Archimedean generator with derivatives and inverse.

    Immutable; all methods are pure and accept scalars or arrays.
    """

    name: str
    params: Mapping[str, float]
    domain_hint: float
    log_domain_hint: float = field(repr=False, compare=False)
    family: GeneratorFamily = field(repr=False, compare=False)

    @property
    def theta(self) -> Optional[float]:
        if self.family.param is None:
            return None
        return float(self.params[self.family.param])

    # Raw evaluations -------------------------------------------------

    def log_phi(self, t: ArrayLike) -> ArrayOrFloat:
        arr = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            out = self.family.log_phi(arr, self.theta)
            out = np.where(np.isposinf(arr), -np.inf, out)
        return _as_output(out, arr.ndim == 0)

    def _phi_raw(self, arr: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.exp(np.where(np.isposinf(arr), -np.inf, self.family.log_phi(arr, self.theta)))

    def _settle(self, arr: np.ndarray, out: np.ndarray) -> np.ndarray:
        # Derivatives vanish where φ has underflowed; overflow there shows up as nan.
        dead = np.isposinf(arr) | (np.isnan(out) & (self._phi_raw(arr) < get_settings().phi_floor))
        return np.where(dead, 0.0, out)

    def phi(self, t: ArrayLike) -> ArrayOrFloat:
        """φ(t), with values below the configured floor clamped to 0."""
        arr = np.asarray(t, dtype=float)
        out = self._phi_raw(arr)
        out = np.where(out < get_settings().phi_floor, 0.0, out)
        out = np.where(arr == 0.0, 1.0, out)
        return _as_output(out, arr.ndim == 0)

    def phi_prime(self, t: ArrayLike) -> ArrayOrFloat:
        arr = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            out = self._settle(arr, self.family.phi_prime(np.where(np.isposinf(arr), 0.0, arr), self.theta))
        return _as_output(out, arr.ndim == 0)

    def phi_second(self, t: ArrayLike) -> ArrayOrFloat:
        arr = np.asarray(t, dtype=float)
        safe = np.where(np.isposinf(arr), 0.0, arr)
        with np.errstate(all="ignore"):
            closed = self.family.phi_second(safe, self.theta)
            if closed is None:
                closed = self._central_difference(self.family.phi_prime, safe)
            out = self._settle(arr, closed)
        return _as_output(out, arr.ndim == 0)

    def _central_difference(self, fn, t: np.ndarray) -> np.ndarray:
        h = np.maximum(get_settings().fd_step, get_settings().fd_step * t)
        return (fn(t + h, self.theta) - fn(t - h, self.theta)) / (2.0 * h)

    def derivative(self, t: ArrayLike, order: int) -> ArrayOrFloat:
        """φ^{(order)}(t) for order 0..3; order 3 is a central difference of φ″."""
        if order == 0:
            arr = np.asarray(t, dtype=float)
            return _as_output(self._phi_raw(arr), arr.ndim == 0)
        if order == 1:
            return self.phi_prime(t)
        if order == 2:
            return self.phi_second(t)
        if order == 3:
            arr = np.asarray(t, dtype=float)
            safe = np.where(np.isposinf(arr), 0.0, arr)
            h = np.maximum(get_settings().fd_step, get_settings().fd_step * safe)
            with np.errstate(all="ignore"):
                out = (np.asarray(self.phi_second(safe + h)) - np.asarray(self.phi_second(safe - h))) / (2.0 * h)
                out = self._settle(arr, out)
            return _as_output(out, arr.ndim == 0)
        raise ParameterError(f"derivative order must be in 0..3, got {order}")

    def phi_inv(self, u: ArrayLike) -> ArrayOrFloat:
        """φ⁻¹(u) for u in (0, 1]; φ⁻¹(1) = 0 exactly."""
        arr = np.asarray(u, dtype=float)
        if np.any(~(arr > 0.0)) or np.any(arr > 1.0 + 1e-15):
            raise DomainError(f"{self.name}: phi_inv needs 0 < u <= 1")
        return _as_output(self._phi_inv_raw(arr), arr.ndim == 0)

    def _phi_inv_raw(self, arr: np.ndarray) -> np.ndarray:
        """φ⁻¹ without domain checks: u <= 0 maps to +inf, u >= 1 to 0."""
        clipped = np.clip(arr, 0.0, 1.0)
        with np.errstate(all="ignore"):
            out = self.family.phi_inv(np.where(clipped > 0.0, clipped, 1.0), self.theta)
        out = np.where(clipped <= 0.0, np.inf, out)
        out = np.where(clipped >= 1.0, 0.0, out)
        return np.where(np.isnan(out), np.inf, np.maximum(out, 0.0))

    # Log scale -------------------------------------------------------

    def log_phi_inv(self, u: ArrayLike) -> ArrayOrFloat:
        """log φ⁻¹(u) for u in (0, 1]; −inf at u = 1."""
        arr = np.asarray(u, dtype=float)
        if np.any(~(arr > 0.0)) or np.any(arr > 1.0 + 1e-15):
            raise DomainError(f"{self.name}: log_phi_inv needs 0 < u <= 1")
        return _as_output(self._log_phi_inv_raw(arr), arr.ndim == 0)

    def _log_phi_inv_raw(self, arr: np.ndarray) -> np.ndarray:
        """log φ⁻¹ without domain checks: u <= 0 maps to +inf, u >= 1 to −inf."""
        clipped = np.clip(np.asarray(arr, dtype=float), 0.0, 1.0)
        with np.errstate(all="ignore"):
            out = self.family.log_phi_inv(np.where(clipped > 0.0, clipped, 1.0), self.theta)
        out = np.where(np.isnan(out), np.inf, out)
        out = np.where(clipped <= 0.0, np.inf, out)
        return np.where(clipped >= 1.0, -np.inf, out)

    def log_abs_derivative(self, lt: ArrayLike, order: int) -> ArrayOrFloat:
        """log|φ^{(order)}(t)| at t = e^lt, finite wherever t stays below float overflow in log form."""
        arr = np.asarray(lt, dtype=float)
        with np.errstate(all="ignore"):
            out = self.family.log_abs_derivative(arr, order, self.theta)
            if out is None and order == 0:
                out = self.family.log_phi(np.exp(arr), self.theta)
            elif out is None:
                out = np.log(np.abs(np.asarray(self.derivative(np.exp(arr), order))))
            out = np.where(np.isposinf(arr), -np.inf, out)
        return _as_output(out, arr.ndim == 0)

    def phi_at_log(self, lt: ArrayLike) -> ArrayOrFloat:
        """φ(e^lt), clamped below the floor like phi."""
        arr = np.asarray(lt, dtype=float)
        out = np.exp(np.asarray(self.log_abs_derivative(arr, 0)))
        out = np.where(out < get_settings().phi_floor, 0.0, out)
        out = np.where(np.isneginf(arr), 1.0, out)
        return _as_output(out, arr.ndim == 0)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GeneratorSpec":
        return make_generator(data["name"], data.get("params", {}))


def _resolve_params(family: GeneratorFamily, params: Mapping[str, float]) -> Dict[str, float]:
    params = dict(params or {})
    if family.param is None:
        if params:
            raise ParameterError(f"{family.name} takes no parameters, got {sorted(params)}")
        return {}
    if family.param in params:
        value = params.pop(family.param)
    else:
        aliases = [k for k in PARAM_ALIASES if k in params]
        if len(aliases) != 1:
            raise ParameterError(f"{family.name} needs parameter {family.param!r}")
        value = params.pop(aliases[0])
    if params:
        raise ParameterError(f"{family.name}: unexpected parameters {sorted(params)}")
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{family.name}: {family.param} must be a real number") from exc
    return {family.param: value}


def make_generator(name: str, params: Optional[Mapping[str, float]] = None) -> GeneratorSpec:
    """Build a catalog generator by name and parameter map."""
    family = _CATALOG.get(name)
    if family is None:
        raise CatalogError(f"unknown generator {name!r}; known: {', '.join(list_generators())}")
    resolved = _resolve_params(family, params or {})
    theta = resolved.get(family.param) if family.param else None
    family.validate(theta)

    settings = get_settings()
    provisional = GeneratorSpec(name, resolved, settings.domain_cap, math.log(settings.domain_cap), family)
    hint = float(provisional._phi_inv_raw(np.asarray(settings.domain_level)))
    log_hint = float(provisional._log_phi_inv_raw(np.asarray(settings.domain_level)))
    if not math.isfinite(hint) or hint > settings.domain_cap:
        logger.debug("%s%s: tail beyond %.3g, domain capped", name, resolved, settings.domain_cap)
        hint = settings.domain_cap
    return GeneratorSpec(name, resolved, hint, log_hint, family)


def phi(g: GeneratorSpec, t: ArrayLike) -> ArrayOrFloat:
    """φ(t) for t >= 0."""
    return g.phi(t)


def phi_inv(g: GeneratorSpec, u: ArrayLike) -> ArrayOrFloat:
    """φ⁻¹(u) for 0 < u <= 1."""
    return g.phi_inv(u)
