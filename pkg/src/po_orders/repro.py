"""
Counterexample figures

Each figure compares one lifetime curve of two systems whose parameters
violate a sufficient condition of an ordering result; the curves cross, so
the ordering is not attained. ``repro_figure`` evaluates both curves, writes
a CSV and an SVG plot, and reports the crossings.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .copulas.generators import make_generator
from .errors import CatalogError
from .grids import GridSpec
from .lifetimes import Weibull
from .settings import get_settings
from .systems import (
    SystemModel,
    parallel_cdf,
    parallel_reversed_hazard,
    series_hazard,
    series_survival,
)

logger = logging.getLogger(__name__)

CurveFn = Callable[[SystemModel, np.ndarray], np.ndarray]

GRID_START = 0.01
GRID_POINTS = 400
UPPER_QUANTILE = 0.999
_SVG_SALT = "po-orders"


def _series_survival(m, t):
    return np.asarray(series_survival(m, t))


def _series_hazard(m, t):
    return np.asarray(series_hazard(m, t, errors="coerce"))


def _parallel_cdf(m, t):
    return np.asarray(parallel_cdf(m, t))


def _parallel_reversed_hazard(m, t):
    return np.asarray(parallel_reversed_hazard(m, t, errors="coerce"))


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    title: str
    ylabel: str
    curve: CurveFn
    x: SystemModel
    y: SystemModel

    def grid(self) -> GridSpec:
        hi = float(self.x.baseline.quantile(UPPER_QUANTILE))
        return GridSpec(GRID_START, hi, GRID_POINTS, spacing="linear")


@dataclass
class FigureResult:
    figure_id: str
    t: np.ndarray
    curve_x: np.ndarray
    curve_y: np.ndarray
    crossings: List[float]
    files: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "figure_id": self.figure_id,
            "rows": int(self.t.size),
            "crossings": self.crossings,
            "crossing_count": len(self.crossings),
            "files": self.files,
        }


def _model(baseline, alphas, name, theta) -> SystemModel:
    return SystemModel(baseline, tuple(alphas), make_generator(name, {"theta": theta}))


def _build_figures() -> Dict[str, FigureSpec]:
    f1 = Weibull(scale=1.0, shape=1.5)
    f2 = Weibull(scale=0.5, shape=2.0)
    f3 = Weibull(scale=1.0, shape=0.5)
    f4 = Weibull(scale=1.0, shape=3.0)
    a2, b2 = (0.2, 0.4, 0.6), (0.35, 0.55, 0.95)
    a3, b3 = (0.9, 1.45, 2.15), (1.2, 1.95, 2.65)
    a4, b4 = (0.2, 0.6, 1.5, 3.5), (0.8, 0.9, 4.5, 5.5)
    specs = [
        FigureSpec(
            "F1", "Series survival, sech_pow(0.9) vs gh_exp(0.3)", "survival", _series_survival,
            _model(f1, (2.0, 3.0, 5.5), "sech_pow", 0.9), _model(f1, (2.5, 3.5, 3.8), "gh_exp", 0.3),
        ),
        FigureSpec(
            "F2a", "Series hazard, log_pow(0.1)", "hazard", _series_hazard,
            _model(f2, a2, "log_pow", 0.1), _model(f2, b2, "log_pow", 0.1),
        ),
        FigureSpec(
            "F2b", "Series hazard, sech_pow(0.2)", "hazard", _series_hazard,
            _model(f2, a2, "sech_pow", 0.2), _model(f2, b2, "sech_pow", 0.2),
        ),
        FigureSpec(
            "F3a", "Parallel cdf, log_frac(0.9) vs gh_exp(8)", "cdf", _parallel_cdf,
            _model(f3, a3, "log_frac", 0.9), _model(f3, b3, "gh_exp", 8.0),
        ),
        FigureSpec(
            "F3b", "Parallel cdf, gumbel_frailty(0.9) vs sech_pow(0.2)", "cdf", _parallel_cdf,
            _model(f3, a3, "gumbel_frailty", 0.9), _model(f3, b3, "sech_pow", 0.2),
        ),
        FigureSpec(
            "F4a", "Parallel reversed hazard, clayton(0.2)", "reversed hazard", _parallel_reversed_hazard,
            _model(f4, a4, "clayton", 0.2), _model(f4, b4, "clayton", 0.2),
        ),
        FigureSpec(
            "F4b", "Parallel reversed hazard, sech_pow(0.2)", "reversed hazard", _parallel_reversed_hazard,
            _model(f4, a4, "sech_pow", 0.2), _model(f4, b4, "sech_pow", 0.2),
        ),
    ]
    return {s.figure_id: s for s in specs}


_FIGURES: Optional[Dict[str, FigureSpec]] = None


def figures() -> Dict[str, FigureSpec]:
    global _FIGURES
    if _FIGURES is None:
        _FIGURES = _build_figures()
    return _FIGURES


def get_figure(figure_id: str) -> FigureSpec:
    try:
        return figures()[figure_id]
    except KeyError:
        raise CatalogError(f"unknown figure {figure_id!r}; known: {', '.join(figures())}") from None


def crossing_points(t: np.ndarray, a: np.ndarray, b: np.ndarray) -> List[float]:
    """Interpolated abscissae where a − b changes sign; exact zeros are skipped."""
    d = a - b
    nz = np.flatnonzero(d != 0)
    out = []
    for i, j in zip(nz[:-1], nz[1:]):
        if np.sign(d[i]) != np.sign(d[j]):
            out.append(float(t[i] + (t[j] - t[i]) * d[i] / (d[i] - d[j])))
    return out


def evaluate_figure(spec: FigureSpec, grid: Optional[GridSpec] = None) -> FigureResult:
    grid = grid or spec.grid()
    t = grid.points()
    cx, cy = spec.curve(spec.x, t), spec.curve(spec.y, t)
    keep = np.isfinite(cx) & np.isfinite(cy)
    if not np.all(keep):
        logger.debug("%s: %d rows dropped where a curve is undefined", spec.figure_id, np.count_nonzero(~keep))
    t, cx, cy = t[keep], cx[keep], cy[keep]
    return FigureResult(spec.figure_id, t, cx, cy, crossing_points(t, cx, cy))


def write_curves_csv(result: FigureResult, path: Path) -> Path:
    digits = get_settings().csv_digits
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "curve_X", "curve_Y"])
        for row in zip(result.t, result.curve_x, result.curve_y):
            writer.writerow([format(float(v), f".{digits}g") for v in row])
    return path


def write_curves_svg(spec: FigureSpec, result: FigureResult, path: Path) -> Path:
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.add_subplot()
    ax.plot(result.t, result.curve_x, label="X", color="tab:blue")
    ax.plot(result.t, result.curve_y, label="Y", color="tab:red", linestyle="--")
    ax.set_xlabel("t")
    ax.set_ylabel(spec.ylabel)
    ax.set_title(spec.title)
    ax.legend()
    with matplotlib.rc_context({"svg.hashsalt": _SVG_SALT}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def repro_figure(figure_id: str, out_dir: Optional[Union[str, Path]] = None) -> FigureResult:
    """Evaluate a figure; with ``out_dir``, also write <id>.csv and <id>.svg there."""
    spec = get_figure(figure_id)
    result = evaluate_figure(spec)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = write_curves_csv(result, out / f"{figure_id}.csv")
        svg_path = write_curves_svg(spec, result, out / f"{figure_id}.svg")
        result.files = [str(csv_path), str(svg_path)]
    logger.info("%s: %d crossings", figure_id, len(result.crossings))
    return result
