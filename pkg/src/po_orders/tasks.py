"""
Task runners shared by the CLI subcommands and scenario dispatch.

Every runner returns a TaskResult: a JSON-ready payload and the process exit
code (0 HOLDS or success, 2 FAILS, 3 INCONCLUSIVE).
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .copulas import (
    Sense,
    RatioProperty,
    Verdict,
    check_generator_validity,
    check_log_convexity,
    check_n_monotone,
    check_ratio_shape,
    check_superadditive_composition,
    kendall_tau,
)
from .errors import ParameterError
from .grids import GridSpec
from .logging_utils import audit_log
from .montecarlo import Coupling, Statistic, mc_agreement, sample, sample_shocked, write_batch_csv
from .orders import (
    Extreme,
    MajorizationMode,
    OrderKind,
    check_order,
    default_order_grid,
    fuzz_theorem,
    list_theorems,
    majorization_report,
    run_theorem,
)
from .orders.theorems import TheoremReport, shock_products_report
from .repro import figures, repro_figure
from .scenario import LoadedScenario, load_scenario
from .settings import get_settings
from .systems import (
    ShockedSystem,
    SystemModel,
    parallel_cdf,
    parallel_reversed_hazard,
    series_hazard,
    series_survival,
    shocked_series_hazard,
    shocked_series_survival,
)

logger = logging.getLogger(__name__)

Model = Union[SystemModel, ShockedSystem]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILS = 2
EXIT_INCONCLUSIVE = 3

_VERDICT_EXIT = {Verdict.HOLDS: EXIT_OK, Verdict.FAILS: EXIT_FAILS, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}


@dataclass
class TaskResult:
    task: str
    payload: Dict[str, Any]
    exit_code: int = EXIT_OK
    files: List[str] = field(default_factory=list)


def verdict_exit(verdict: Verdict) -> int:
    return _VERDICT_EXIT[verdict]


def jsonable(value: Any) -> Any:
    """Recursively turn numpy values into plain JSON; NaN and inf become None."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def _unshocked(model: Model) -> SystemModel:
    return model.system if isinstance(model, ShockedSystem) else model


def _prepare_out(out_dir: Optional[Union[str, Path]]) -> Optional[Path]:
    if out_dir is None:
        return None
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _audit_files(task: str, files: Sequence[str]) -> None:
    for path in files:
        audit_log("artifact_written", {"task": task, "path": path})


def _curve_table(model: Model, t: np.ndarray) -> Dict[str, np.ndarray]:
    if isinstance(model, ShockedSystem):
        return {
            "shocked_series_survival": np.asarray(shocked_series_survival(model, t)),
            "shocked_series_hazard": np.asarray(shocked_series_hazard(model, t, errors="coerce")),
        }
    return {
        "series_survival": np.asarray(series_survival(model, t)),
        "series_hazard": np.asarray(series_hazard(model, t, errors="coerce")),
        "parallel_cdf": np.asarray(parallel_cdf(model, t)),
        "parallel_reversed_hazard": np.asarray(parallel_reversed_hazard(model, t, errors="coerce")),
    }


def _write_table(path: Path, t: np.ndarray, table: Dict[str, np.ndarray]) -> str:
    digits = get_settings().csv_digits
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", *table])
        for i, ti in enumerate(t):
            writer.writerow([format(float(ti), f".{digits}g"), *(format(float(col[i]), f".{digits}g") for col in table.values())])
    return str(path)


def eval_task(models: Sequence[Model], grid: Optional[GridSpec] = None, out_dir=None) -> TaskResult:
    """Tabulate the system laws of each model on the grid."""
    grid = grid or default_order_grid(*models)
    t = grid.points()
    out = _prepare_out(out_dir)
    tables, files = [], []
    for i, model in enumerate(models):
        table = _curve_table(model, t)
        tables.append({"model": model.to_dict(), "t": t, **table})
        if out is not None:
            files.append(_write_table(out / f"eval_model{i}.csv", t, table))
    _audit_files("EVAL", files)
    return TaskResult("EVAL", {"task": "EVAL", "grid": grid.describe(), "tables": tables, "files": files}, EXIT_OK, files)


def order_check_task(models: Sequence[Model], order: str, which: str = "SERIES", grid: Optional[GridSpec] = None) -> TaskResult:
    if len(models) != 2:
        raise ParameterError(f"order-check compares two models, got {len(models)}")
    try:
        kind, extreme = OrderKind(order.upper()), Extreme(which.upper())
    except ValueError:
        raise ParameterError(f"unknown order {order!r} or extreme {which!r}") from None
    verdict = check_order(models[0], models[1], kind, extreme, grid)
    payload = {"task": "ORDER_CHECK", "which": which.upper(), **verdict.to_dict()}
    return TaskResult("ORDER_CHECK", payload, verdict_exit(verdict.verdict))


def _generator_reports(model: Model) -> Dict[str, Any]:
    system = _unshocked(model)
    g = system.generator
    reports = [
        check_generator_validity(g),
        check_log_convexity(g, Sense.CONVEX),
        check_log_convexity(g, Sense.CONCAVE),
        check_ratio_shape(g, RatioProperty.DECREASING),
        check_ratio_shape(g, RatioProperty.CONVEX),
        check_ratio_shape(g, RatioProperty.CONCAVE),
        check_n_monotone(g, system.n),
    ]
    return {"generator": g.to_dict(), "kendall_tau": kendall_tau(g), "checks": [r.to_dict() for r in reports]}


def conditions_task(models: Sequence[Model]) -> TaskResult:
    """Every hypothesis check that applies to the scenario's generators and vectors."""
    payload: Dict[str, Any] = {"task": "CONDITIONS", "models": [_generator_reports(m) for m in models]}
    if len(models) == 2:
        x, y = (_unshocked(m) for m in models)
        pair = [
            check_superadditive_composition(x.generator, y.generator),
            check_superadditive_composition(y.generator, x.generator),
        ]
        if x.n == y.n:
            pair.extend(majorization_report(x.alphas, y.alphas, mode) for mode in MajorizationMode)
        if all(isinstance(m, ShockedSystem) for m in models):
            pair.append(shock_products_report(models[0].probs, models[1].probs))
        payload["pair"] = [r.to_dict() for r in pair]
    return TaskResult("CONDITIONS", payload, EXIT_OK)


def theorem_exit(report: TheoremReport) -> int:
    """2 when the conclusion fails under holding hypotheses, 3 when the hypotheses are undecided, else 0."""
    if not report.consistent:
        return EXIT_FAILS
    if report.abstained and not any(r.verdict is Verdict.FAILS for r in report.hypothesis_reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def theorem_task(models: Sequence[Model], theorem_id: str, alpha_hat: Optional[float] = None, grid: Optional[GridSpec] = None) -> TaskResult:
    report = run_theorem(theorem_id, models, alpha_hat=alpha_hat, grid=grid)
    payload = {"task": "THEOREM", **report.to_dict()}
    return TaskResult("THEOREM", payload, theorem_exit(report))


def sample_task(model: Model, size: int, seed: int, out_dir=None) -> TaskResult:
    """Draw batches, validate them against the analytic laws, optionally export them.

    The series law is checked on a survival coupled batch and the parallel law
    on a cdf coupled one drawn with the same seed.
    """
    if isinstance(model, ShockedSystem):
        batch = sample_shocked(model, size, seed)
        checks = [mc_agreement(batch, Statistic.MIN)]
        extra = None
    else:
        batch = sample(model, size, seed)
        extra = sample(model, size, seed, coupling=Coupling.CDF)
        checks = [mc_agreement(batch, Statistic.MIN), mc_agreement(extra, Statistic.MAX)]
    files = []
    out = _prepare_out(out_dir)
    if out is not None:
        files.append(str(write_batch_csv(batch, out / f"sample_seed{seed}.csv")))
        if extra is not None:
            files.append(str(write_batch_csv(extra, out / f"sample_seed{seed}_cdf.csv")))
    _audit_files("SAMPLE", files)
    failed = any(c.verdict is Verdict.FAILS for c in checks)
    payload = {
        "task": "SAMPLE",
        "size": batch.size,
        "seed": seed,
        "agreement": [c.to_dict() for c in checks],
        "files": files,
    }
    return TaskResult("SAMPLE", payload, EXIT_FAILS if failed else EXIT_OK, files)


def repro_task(figure: str, out_dir=None) -> TaskResult:
    ids = list(figures()) if figure.lower() == "all" else [figure]
    results = [repro_figure(fid, out_dir) for fid in ids]
    files = [f for r in results for f in r.files]
    _audit_files("REPRO", files)
    return TaskResult("REPRO", {"task": "REPRO", "figures": [r.to_dict() for r in results]}, EXIT_OK, files)


def fuzz_task(theorem_ids: Sequence[str], count: int, seed: int = 0) -> TaskResult:
    ids = list_theorems() if not theorem_ids or "all" in (t.lower() for t in theorem_ids) else list(theorem_ids)
    summary, inconsistent = [], 0
    for tid in ids:
        reports = fuzz_theorem(tid, count, seed)
        bad = [r for r in reports if not r.consistent]
        inconsistent += len(bad)
        summary.append({
            "theorem_id": tid,
            "runs": len(reports),
            "hypotheses_hold": sum(r.hypotheses_hold for r in reports),
            "abstained": sum(r.abstained for r in reports),
            "inconsistent": len(bad),
            "first_inconsistent": bad[0].to_dict() if bad else None,
        })
    payload = {"task": "FUZZ", "count": count, "seed": seed, "theorems": summary}
    return TaskResult("FUZZ", payload, EXIT_FAILS if inconsistent else EXIT_OK)


def run_loaded(loaded: LoadedScenario, out_dir=None) -> TaskResult:
    """Dispatch a validated scenario to its task."""
    p = loaded.params
    grid = loaded.grid()
    task = loaded.task
    if task == "EVAL":
        return eval_task(loaded.models, grid, out_dir)
    if task == "ORDER_CHECK":
        return order_check_task(loaded.models, p.order, p.which, grid)
    if task == "CONDITIONS":
        return conditions_task(loaded.models)
    if task == "THEOREM":
        return theorem_task(loaded.models, p.theorem_id, p.alpha_hat, grid)
    if task == "SAMPLE":
        return sample_task(loaded.models[0], p.size, p.seed, out_dir)
    return repro_task(p.figure, out_dir)


def run_scenario(path: Union[str, Path], out_dir=None) -> TaskResult:
    """Load a scenario file and run the task it names."""
    return run_loaded(load_scenario(path), out_dir)
