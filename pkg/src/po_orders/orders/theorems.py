"""
Theorem harness

Each registered result names its hypotheses (generator shape conditions,
a majorization relation between the odds-ratio vectors, shock products)
and its conclusion (an order between series or parallel lifetimes). The
harness runs every hypothesis as a CheckReport and the conclusion as an
OrderVerdict. A report is inconsistent when all hypotheses hold and the
conclusion does not.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from ..copulas.checks import (
    CheckReport,
    RatioProperty,
    Sense,
    Verdict,
    any_of,
    check_log_convexity,
    check_ratio_shape,
    check_superadditive_composition,
)
from ..copulas.generators import GeneratorSpec
from ..errors import CatalogError, ParameterError
from ..grids import GridSpec
from ..systems import ShockedSystem, SystemModel
from .comparison import Extreme, Model, OrderKind, OrderVerdict, check_order
from .majorization import MajorizationMode, first_violation

logger = logging.getLogger(__name__)

_MODE_SYMBOL = {MajorizationMode.M: "m", MajorizationMode.W: "w", MajorizationMode.P: "p"}


@dataclass
class TheoremContext:
    """The two sides of a scenario, unpacked."""

    x: SystemModel
    y: SystemModel
    p: Optional[Sequence[float]] = None
    q: Optional[Sequence[float]] = None

    @property
    def g1(self) -> GeneratorSpec:
        return self.x.generator

    @property
    def g2(self) -> GeneratorSpec:
        return self.y.generator


Hypotheses = Callable[[TheoremContext], List[CheckReport]]


@dataclass(frozen=True)
class TheoremSpec:
    theorem_id: str
    statement: str
    order: OrderKind
    extreme: Extreme
    hypotheses: Hypotheses
    same_generator: bool = False
    shocked: bool = False
    constant_beta: bool = False


@dataclass
class TheoremReport:
    theorem_id: str
    statement: str
    hypothesis_reports: List[CheckReport]
    conclusion: OrderVerdict
    consistent: bool = field(init=False)

    def __post_init__(self):
        self.consistent = not self.hypotheses_hold or self.conclusion.verdict is Verdict.HOLDS

    @property
    def hypotheses_hold(self) -> bool:
        return all(r.holds for r in self.hypothesis_reports)

    @property
    def abstained(self) -> bool:
        return any(r.verdict is Verdict.INCONCLUSIVE for r in self.hypothesis_reports)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem_id": self.theorem_id,
            "statement": self.statement,
            "hypothesis_reports": [r.to_dict() for r in self.hypothesis_reports],
            "conclusion": self.conclusion.to_dict(),
            "consistent": self.consistent,
        }


# ----------------------------------------------------------------------------
# Hypothesis building blocks
# ----------------------------------------------------------------------------


def majorization_report(x: Sequence[float], y: Sequence[float], mode: MajorizationMode) -> CheckReport:
    """``x ⪰ y`` in the given mode; the witness is (j, partial of x, partial of y)."""
    name = f"alpha ⪰_{_MODE_SYMBOL[mode]} beta"
    j = first_violation(x, y, mode)
    if j is None:
        return CheckReport(name, Verdict.HOLDS)
    xs, ys = sorted(x), sorted(y)
    if mode is MajorizationMode.P:
        lhs, rhs = math.prod(xs[: j + 1]), math.prod(ys[: j + 1])
    else:
        lhs, rhs = math.fsum(xs[: j + 1]), math.fsum(ys[: j + 1])
    return CheckReport(name, Verdict.FAILS, [[float(j + 1), lhs, rhs]], note="first failing partial comparison")


def shock_products_report(p: Sequence[float], q: Sequence[float]) -> CheckReport:
    lhs, rhs = math.prod(p), math.prod(q)
    if lhs <= rhs * (1.0 + 1e-12):
        return CheckReport("prod p <= prod q", Verdict.HOLDS)
    return CheckReport("prod p <= prod q", Verdict.FAILS, [[lhs, rhs]])


def mean_bound_report(alphas: Sequence[float], alpha_hat: float) -> CheckReport:
    mean = math.fsum(alphas) / len(alphas)
    name = "alpha_hat >= mean(alpha)"
    if alpha_hat >= mean - 1e-12:
        return CheckReport(name, Verdict.HOLDS)
    return CheckReport(name, Verdict.FAILS, [[alpha_hat, mean]])


def _log_shape_either(ctx: TheoremContext, sense: Sense) -> CheckReport:
    word = "log-convex" if sense is Sense.CONVEX else "log-concave"
    reports = [check_log_convexity(ctx.g1, sense), check_log_convexity(ctx.g2, sense)]
    return any_of(f"phi1 or phi2 {word}", reports)


def _ratio_decreasing_and_bent(g: GeneratorSpec, bends: Sequence[RatioProperty]) -> List[CheckReport]:
    reports = [check_ratio_shape(g, RatioProperty.DECREASING)]
    shape = [check_ratio_shape(g, prop) for prop in bends]
    reports.append(shape[0] if len(shape) == 1 else any_of("ratio concave or convex", shape))
    return reports


def _st_series_p(ctx):
    return [
        _log_shape_either(ctx, Sense.CONVEX),
        check_superadditive_composition(ctx.g1, ctx.g2),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.P),
    ]


def _st_series_p_same(ctx):
    return [
        check_log_convexity(ctx.g1, Sense.CONVEX),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.P),
    ]


def _st_series_w(ctx):
    return [
        check_superadditive_composition(ctx.g1, ctx.g2),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.W),
    ]


def _st_series_w_same(ctx):
    return [majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.W)]


def _hr_series(ctx):
    return [
        check_log_convexity(ctx.g1, Sense.CONCAVE),
        *_ratio_decreasing_and_bent(ctx.g1, (RatioProperty.CONCAVE, RatioProperty.CONVEX)),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.W),
    ]


def _hr_series_constant(ctx):
    return [
        check_log_convexity(ctx.g1, Sense.CONCAVE),
        *_ratio_decreasing_and_bent(ctx.g1, (RatioProperty.CONCAVE, RatioProperty.CONVEX)),
        mean_bound_report(ctx.x.alphas, ctx.y.alphas[0]),
    ]


def _st_parallel_w(ctx):
    return [
        _log_shape_either(ctx, Sense.CONCAVE),
        check_superadditive_composition(ctx.g2, ctx.g1),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.W),
    ]


def _st_parallel_w_same(ctx):
    return [
        check_log_convexity(ctx.g1, Sense.CONCAVE),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.W),
    ]


def _rhr_parallel(ctx):
    return [
        check_log_convexity(ctx.g1, Sense.CONCAVE),
        *_ratio_decreasing_and_bent(ctx.g1, (RatioProperty.CONVEX,)),
        majorization_report(ctx.x.alphas, ctx.y.alphas, MajorizationMode.W),
    ]


def _with_shock_products(base: Hypotheses) -> Hypotheses:
    def hypotheses(ctx: TheoremContext) -> List[CheckReport]:
        return [*base(ctx), shock_products_report(ctx.p, ctx.q)]

    return hypotheses


_ST, _HR, _RHR = OrderKind.ST, OrderKind.HR, OrderKind.RHR
_SER, _PAR = Extreme.SERIES, Extreme.PARALLEL

_REGISTRY: Dict[str, TheoremSpec] = {
    spec.theorem_id: spec
    for spec in (
        TheoremSpec("T3.1", "phi1 or phi2 log-convex, phi2^-1∘phi1 superadditive, alpha ⪰_p beta => X1:n <=st Y1:n", _ST, _SER, _st_series_p),
        TheoremSpec("C3.1", "phi log-convex, alpha ⪰_p beta => X1:n <=st Y1:n", _ST, _SER, _st_series_p_same, same_generator=True),
        TheoremSpec("T3.2", "phi2^-1∘phi1 superadditive, alpha ⪰_w beta => X1:n <=st Y1:n", _ST, _SER, _st_series_w),
        TheoremSpec("C3.2", "alpha ⪰_w beta => X1:n <=st Y1:n", _ST, _SER, _st_series_w_same, same_generator=True),
        TheoremSpec(
            "T3.3",
            "phi log-concave, phi(1-phi)/phi' decreasing and concave or convex, alpha ⪰_w beta => X1:n <=hr Y1:n",
            _HR, _SER, _hr_series, same_generator=True,
        ),
        TheoremSpec(
            "C3.3",
            "phi log-concave, phi(1-phi)/phi' decreasing and concave or convex, alpha_hat >= mean(alpha) => X1:n <=hr Y1:n with beta = alpha_hat",
            _HR, _SER, _hr_series_constant, same_generator=True, constant_beta=True,
        ),
        TheoremSpec("T4.1", "phi1 or phi2 log-concave, phi1^-1∘phi2 superadditive, alpha ⪰_w beta => Xn:n <=st Yn:n", _ST, _PAR, _st_parallel_w),
        TheoremSpec("C4.1", "phi log-concave, alpha ⪰_w beta => Xn:n <=st Yn:n", _ST, _PAR, _st_parallel_w_same, same_generator=True),
        TheoremSpec(
            "T4.2",
            "phi log-concave, phi(1-phi)/phi' decreasing and convex, alpha ⪰_w beta => Xn:n <=rhr Yn:n",
            _RHR, _PAR, _rhr_parallel, same_generator=True,
        ),
        TheoremSpec("T5.1", "T3.1 hypotheses and prod p <= prod q => X*1:n <=st Y*1:n", _ST, _SER, _with_shock_products(_st_series_p), shocked=True),
        TheoremSpec(
            "C5.1", "C3.1 hypotheses and prod p <= prod q => X*1:n <=st Y*1:n",
            _ST, _SER, _with_shock_products(_st_series_p_same), same_generator=True, shocked=True,
        ),
        TheoremSpec("T5.2", "T3.2 hypotheses and prod p <= prod q => X*1:n <=st Y*1:n", _ST, _SER, _with_shock_products(_st_series_w), shocked=True),
        TheoremSpec(
            "C5.2", "alpha ⪰_w beta and prod p <= prod q => X*1:n <=st Y*1:n",
            _ST, _SER, _with_shock_products(_st_series_w_same), same_generator=True, shocked=True,
        ),
        TheoremSpec("T5.3", "T3.3 hypotheses => X*1:n <=hr Y*1:n", _HR, _SER, _hr_series, same_generator=True, shocked=True),
    )
}


def list_theorems() -> List[str]:
    return list(_REGISTRY)


def get_theorem(theorem_id: str) -> TheoremSpec:
    try:
        return _REGISTRY[theorem_id.upper()]
    except KeyError:
        raise CatalogError(f"unknown theorem {theorem_id!r}; known: {', '.join(_REGISTRY)}") from None


def _same_generator(g1: GeneratorSpec, g2: GeneratorSpec) -> bool:
    return g1.name == g2.name and g1.params == g2.params


def _context(spec: TheoremSpec, models: Sequence[Model], alpha_hat: Optional[float]) -> TheoremContext:
    models = list(models)
    if spec.constant_beta and alpha_hat is not None:
        if len(models) != 1:
            raise ParameterError(f"{spec.theorem_id} with alpha_hat takes a single model")
        x = models[0]
        base = x.system if isinstance(x, ShockedSystem) else x
        models.append(base.with_alphas([float(alpha_hat)] * base.n))
    if len(models) != 2:
        raise ParameterError(f"{spec.theorem_id} compares two models, got {len(models)}")
    a, b = models

    if spec.shocked:
        if not (isinstance(a, ShockedSystem) and isinstance(b, ShockedSystem)):
            raise ParameterError(f"{spec.theorem_id} compares shocked systems; both models need probs")
        ctx = TheoremContext(a.system, b.system, a.probs, b.probs)
    else:
        if isinstance(a, ShockedSystem) or isinstance(b, ShockedSystem):
            raise ParameterError(f"{spec.theorem_id} compares unshocked systems; drop probs")
        ctx = TheoremContext(a, b)

    if ctx.x.n != ctx.y.n:
        raise ParameterError(f"systems differ in size: {ctx.x.n} vs {ctx.y.n}")
    if ctx.x.baseline.to_dict() != ctx.y.baseline.to_dict():
        raise ParameterError(f"{spec.theorem_id} needs a common baseline")
    if spec.same_generator and not _same_generator(ctx.g1, ctx.g2):
        raise ParameterError(f"{spec.theorem_id} needs one generator on both sides, got {ctx.g1.name} and {ctx.g2.name}")
    if spec.constant_beta and len(set(ctx.y.alphas)) != 1:
        raise ParameterError(f"{spec.theorem_id} needs a constant beta vector, got {ctx.y.alphas}")
    return ctx


def run_theorem(
    theorem_id: str,
    models: Sequence[Model],
    alpha_hat: Optional[float] = None,
    grid: Optional[GridSpec] = None,
) -> TheoremReport:
    """Check a theorem's hypotheses on a scenario and test its conclusion."""
    spec = get_theorem(theorem_id)
    ctx = _context(spec, models, alpha_hat)
    hypotheses = spec.hypotheses(ctx)
    if spec.shocked:
        left, right = ShockedSystem(ctx.x, tuple(ctx.p)), ShockedSystem(ctx.y, tuple(ctx.q))
    else:
        left, right = ctx.x, ctx.y
    conclusion = check_order(left, right, spec.order, spec.extreme, grid)
    report = TheoremReport(spec.theorem_id, spec.statement, hypotheses, conclusion)
    if not report.consistent:
        logger.warning("%s: hypotheses hold but conclusion is %s", spec.theorem_id, conclusion.verdict.value)
    return report
