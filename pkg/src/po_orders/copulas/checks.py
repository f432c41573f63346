"""
Generator hypothesis checks

Grid-based falsifiers for the analytic conditions that the ordering results
place on generators: log-convexity / log-concavity of φ, superadditivity of
φ₂⁻¹∘φ₁, and the shape of h = φ(1−φ)/φ′. A check HOLDS when no grid point
violates the property by more than the tolerance, FAILS with witnesses when
some point does, and is INCONCLUSIVE when the usable grid is too small.

Differences are normalised by the local magnitude of the function, so the
tolerance is relative to the values being compared.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..errors import ParameterError
from ..grids import GridSpec
from ..settings import get_settings
from .generators import GeneratorSpec

logger = logging.getLogger(__name__)

MAX_WITNESSES = 10
_TINY = 1e-300


class Verdict(Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


class Sense(Enum):
    CONVEX = "CONVEX"
    CONCAVE = "CONCAVE"


class RatioProperty(Enum):
    DECREASING = "DECREASING"
    CONVEX = "CONVEX"
    CONCAVE = "CONCAVE"


@dataclass
class CheckReport:
    """Outcome of a numerical hypothesis check."""

    name: str
    verdict: Verdict
    witness: List[List[float]] = field(default_factory=list)
    grid: str = ""
    tolerance: float = 0.0
    note: str = ""

    def __post_init__(self):
        if (self.verdict is Verdict.FAILS) != bool(self.witness):
            raise ValueError(f"{self.name}: FAILS must carry witnesses and only FAILS may")

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "witness": self.witness,
            "grid": self.grid,
            "tolerance": self.tolerance,
            "note": self.note,
        }


def _report(name: str, violations: np.ndarray, severity: np.ndarray, points: np.ndarray, grid: str, tol: float, note: str = "") -> CheckReport:
    if not np.any(violations):
        return CheckReport(name, Verdict.HOLDS, [], grid, tol, note)
    idx = np.flatnonzero(violations)
    worst = idx[np.argsort(-severity[idx], kind="stable")][:MAX_WITNESSES]
    witness = [[float(v) for v in np.atleast_1d(points[i])] for i in worst]
    return CheckReport(name, Verdict.FAILS, witness, grid, tol, note)


def _inconclusive(name: str, grid: str, tol: float, note: str) -> CheckReport:
    logger.debug("%s inconclusive: %s", name, note)
    return CheckReport(name, Verdict.INCONCLUSIVE, [], grid, tol, note)


def shape_domain(g: GeneratorSpec) -> float:
    return min(g.domain_hint, get_settings().default_domain)


def default_shape_grid(g: GeneratorSpec) -> GridSpec:
    s = get_settings()
    return GridSpec(s.shape_grid_lo, shape_domain(g), s.shape_grid_points)


def default_superadd_grid(g: GeneratorSpec) -> GridSpec:
    s = get_settings()
    return GridSpec(s.superadd_grid_lo, shape_domain(g) / 2.0, s.superadd_grid_points)


def _label(g: GeneratorSpec) -> str:
    params = ",".join(f"{k}={v:g}" for k, v in g.params.items())
    return f"{g.name}({params})"


def _second_difference_stat(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Scaled second divided differences; positive where y bends upward."""
    s01 = np.diff(y[:-1]) / np.diff(t[:-1])
    s12 = np.diff(y[1:]) / np.diff(t[1:])
    scale = np.abs(y[:-2]) + np.abs(y[1:-1]) + np.abs(y[2:]) + _TINY
    return (s12 - s01) * (t[2:] - t[:-2]) / scale


def _triples(t: np.ndarray) -> np.ndarray:
    return np.stack([t[:-2], t[1:-1], t[2:]], axis=1)


def _checked_points(grid: GridSpec, minimum: int = 3) -> np.ndarray:
    t = grid.points()
    if t.size < minimum:
        raise ParameterError(f"degenerate grid: need at least {minimum} points, got {t.size}")
    return t


def check_log_convexity(g: GeneratorSpec, sense: Sense, grid: Optional[GridSpec] = None) -> CheckReport:
    """Check that ln φ is convex (or concave) on the grid."""
    grid = grid or default_shape_grid(g)
    tol = get_settings().shape_tolerance
    name = f"log-{sense.value.lower()} {_label(g)}"
    t = _checked_points(grid)
    log_phi = np.asarray(g.log_phi(t))
    keep = np.isfinite(log_phi) & (log_phi > math.log(get_settings().phi_floor))
    t, log_phi = t[keep], log_phi[keep]
    if t.size < 3:
        return _inconclusive(name, grid.describe(), tol, "fewer than 3 points before underflow")
    stat = _second_difference_stat(t, log_phi)
    signed = -stat if sense is Sense.CONVEX else stat
    return _report(name, signed > tol, signed, _triples(t), grid.describe(), tol)


def check_superadditive_composition(g1: GeneratorSpec, g2: GeneratorSpec, grid: Optional[GridSpec] = None) -> CheckReport:
    """Check h(x+y) >= h(x) + h(y) for h = φ₂⁻¹∘φ₁ on a square grid."""
    grid = grid or default_superadd_grid(g1)
    tol = get_settings().shape_tolerance
    name = f"superadditive inv({_label(g2)}) o {_label(g1)}"
    axis = grid.points()
    x, y = np.meshgrid(axis, axis, indexing="ij")
    x, y = x.ravel(), y.ravel()

    def log_h(t: np.ndarray) -> np.ndarray:
        return g2._log_phi_inv_raw(g1._phi_raw(t))

    a, b, c = log_h(x), log_h(y), log_h(x + y)
    keep = (g1._phi_raw(x + y) >= get_settings().phi_floor) & np.isfinite(a) & np.isfinite(b) & np.isfinite(c)
    if not np.any(keep):
        return _inconclusive(name, f"{grid.describe()} squared", tol, "composition not finite on grid")
    x, y, a, b, c = x[keep], y[keep], a[keep], b[keep], c[keep]
    # (h(x+y) − h(x) − h(y)) / (h(x+y) + h(x) + h(y)), scaled by the largest term; h >= 0
    top = np.maximum(np.maximum(a, b), c)
    ea, eb, ec = np.exp(a - top), np.exp(b - top), np.exp(c - top)
    stat = (ec - ea - eb) / (ec + ea + eb)
    # log h carries an absolute error of order eps·|log h|
    noise = 8.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(top))
    return _report(name, stat < -(tol + noise), -stat, np.stack([x, y], axis=1), f"{grid.describe()} squared", tol)


def ratio_values(g: GeneratorSpec, t: np.ndarray) -> np.ndarray:
    """h(t) = φ(t)(1 − φ(t)) / φ′(t)."""
    log_phi = np.asarray(g.log_phi(t))
    with np.errstate(all="ignore"):
        return np.exp(log_phi) * -np.expm1(log_phi) / np.asarray(g.phi_prime(t))


def check_ratio_shape(g: GeneratorSpec, prop: RatioProperty, grid: Optional[GridSpec] = None) -> CheckReport:
    """Check monotonicity or curvature of h = φ(1−φ)/φ′."""
    grid = grid or default_shape_grid(g)
    tol = get_settings().shape_tolerance
    name = f"ratio {prop.value.lower()} {_label(g)}"
    t = _checked_points(grid)
    keep = np.asarray(g.log_phi(t)) > math.log(get_settings().phi_floor)
    t = t[keep]
    if t.size < 3:
        return _inconclusive(name, grid.describe(), tol, "fewer than 3 points before underflow")
    if np.any(np.asarray(g.phi_prime(t)) == 0.0):
        return _inconclusive(name, grid.describe(), tol, "phi' vanishes on the grid")
    h = ratio_values(g, t)
    if not np.all(np.isfinite(h)):
        return _inconclusive(name, grid.describe(), tol, "ratio not finite on the grid")

    if prop is RatioProperty.DECREASING:
        stat = np.diff(h) / (np.abs(h[:-1]) + np.abs(h[1:]) + _TINY)
        pairs = np.stack([t[:-1], t[1:]], axis=1)
        return _report(name, stat > tol, stat, pairs, grid.describe(), tol)
    stat = _second_difference_stat(t, h)
    signed = -stat if prop is RatioProperty.CONVEX else stat
    return _report(name, signed > tol, signed, _triples(t), grid.describe(), tol)


def check_n_monotone(g: GeneratorSpec, dim: int, grid: Optional[GridSpec] = None) -> CheckReport:
    """Sign check of (−1)^k φ^{(k)} >= 0 for k <= dim (orders above 3 are not evaluated).

    A generator yields a dim-dimensional copula only if it is dim-monotone.
    """
    if dim < 2:
        raise ParameterError(f"dimension must be >= 2, got {dim}")
    grid = grid or default_shape_grid(g)
    tol = get_settings().shape_tolerance
    name = f"{dim}-monotone {_label(g)}"
    t = _checked_points(grid, minimum=1)
    phi = np.asarray(g.derivative(t, 0))
    keep = phi >= get_settings().phi_floor
    t, phi = t[keep], phi[keep]
    if t.size == 0:
        return _inconclusive(name, grid.describe(), tol, "no points before underflow")

    violations = np.zeros(t.size, dtype=bool)
    severity = np.zeros(t.size)
    for order in range(1, min(dim, 3) + 1):
        signed = (-1) ** order * np.asarray(g.derivative(t, order)) / phi
        # third derivatives are central differences of φ″
        order_tol = tol if order < 3 else math.sqrt(tol)
        bad = signed < -order_tol
        violations |= bad
        severity = np.maximum(severity, np.where(bad, -signed, 0.0))
    report = _report(name, violations, severity, t[:, None], grid.describe(), tol)
    if report.verdict is Verdict.HOLDS and dim > 3:
        return _inconclusive(name, grid.describe(), tol, "orders above 3 not evaluated")
    return report


def check_generator_validity(g: GeneratorSpec, grid: Optional[GridSpec] = None) -> CheckReport:
    """φ(0) = 1, φ′ < 0 before underflow, φ(φ⁻¹(1e-10)) < 1e-9 and φ(φ⁻¹(u)) = u, on the log scale."""
    grid = grid or default_shape_grid(g)
    tol = 1e-10
    name = f"valid generator {_label(g)}"
    witness: List[List[float]] = []
    notes: List[str] = []

    if g.phi(0.0) != 1.0:
        witness.append([0.0])
        notes.append("phi(0) != 1")
    t = grid.points()
    alive = np.asarray(g.derivative(t, 0)) > get_settings().phi_floor
    slope = np.asarray(g.phi_prime(t))
    bad_slope = alive & ~(slope < 0.0)
    witness.extend([float(v)] for v in t[bad_slope][:MAX_WITNESSES])
    if np.any(bad_slope):
        notes.append("phi not strictly decreasing")

    u = np.geomspace(1e-8, 1.0, 200)
    log_inv = np.asarray(g._log_phi_inv_raw(u))
    finite = ~np.isposinf(log_inv)
    back = np.exp(np.asarray(g.log_abs_derivative(log_inv[finite], 0)))
    off = np.abs(back - u[finite]) > tol * u[finite]
    witness.extend([float(v)] for v in u[finite][off][:MAX_WITNESSES])
    if np.any(off):
        notes.append("inverse round trip off")

    if witness:
        return CheckReport(name, Verdict.FAILS, witness, grid.describe(), tol, "; ".join(notes))
    tail = g.phi_at_log(g.log_domain_hint)
    if not (math.isfinite(g.log_domain_hint) and tail < 1e-9):
        return _inconclusive(name, grid.describe(), tol, f"tail not resolved: log t = {g.log_domain_hint:.3g}, phi = {tail:.3g}")
    return CheckReport(name, Verdict.HOLDS, [], grid.describe(), tol, "")


def all_of(name: str, reports: Sequence[CheckReport]) -> CheckReport:
    """HOLDS if every report holds, FAILS if any fails."""
    failed = [r for r in reports if r.verdict is Verdict.FAILS]
    if failed:
        return CheckReport(name, Verdict.FAILS, failed[0].witness, failed[0].grid, failed[0].tolerance, failed[0].name)
    if all(r.holds for r in reports):
        return CheckReport(name, Verdict.HOLDS, [], "", 0.0, " and ".join(r.name for r in reports))
    return CheckReport(name, Verdict.INCONCLUSIVE, [], "", 0.0, " and ".join(r.name for r in reports))


def any_of(name: str, reports: Sequence[CheckReport]) -> CheckReport:
    """HOLDS if some report holds, FAILS if all fail."""
    winners = [r for r in reports if r.holds]
    if winners:
        return CheckReport(name, Verdict.HOLDS, [], winners[0].grid, winners[0].tolerance, winners[0].name)
    if reports and all(r.verdict is Verdict.FAILS for r in reports):
        first = reports[0]
        return CheckReport(name, Verdict.FAILS, first.witness, first.grid, first.tolerance, " or ".join(r.name for r in reports))
    return CheckReport(name, Verdict.INCONCLUSIVE, [], "", 0.0, " or ".join(r.name for r in reports))
