"""
Scenario files

A scenario is a JSON document naming one or two systems and a task:

    {
      "spec_version": 1,
      "task": "ORDER_CHECK",
      "models": [{"baseline": {...}, "alphas": [...], "generator": {...}}, ...],
      "task_params": {"order": "ST", "which": "SERIES"}
    }

Structural problems come from the pydantic schema, catalog problems from
building the systems; both are reported as ScenarioError with field paths.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import PoOrdersError, ScenarioError
from .grids import GridSpec
from .systems import ShockedSystem, SystemModel, model_from_dict

logger = logging.getLogger(__name__)

Task = Literal["EVAL", "ORDER_CHECK", "CONDITIONS", "THEOREM", "SAMPLE", "REPRO"]
PositiveFloat = Annotated[float, Field(gt=0)]
Probability = Annotated[float, Field(gt=0, le=1)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BaselineIn(_Strict):
    family: str = Field(..., description="Baseline family: weibull, exponential or tabulated")
    params: Dict[str, Any] = Field(default_factory=dict)


class GeneratorIn(_Strict):
    name: str = Field(..., description="Catalog generator name")
    params: Dict[str, float] = Field(default_factory=dict)


class ModelIn(_Strict):
    baseline: BaselineIn
    alphas: List[PositiveFloat] = Field(..., min_length=2)
    generator: GeneratorIn
    probs: Optional[List[Probability]] = Field(None, description="Shock survival probabilities")


class TaskParams(_Strict):
    grid: Optional[str] = Field(None, description="lo:hi:count")
    order: Optional[Literal["ST", "HR", "RHR"]] = None
    which: Literal["SERIES", "PARALLEL"] = "SERIES"
    theorem_id: Optional[str] = None
    alpha_hat: Optional[PositiveFloat] = None
    figure: Optional[str] = None
    seed: int = 0
    size: int = Field(10_000, ge=1)


class Scenario(_Strict):
    spec_version: Literal[1]
    task: Task
    models: List[ModelIn] = Field(default_factory=list, max_length=2)
    task_params: TaskParams = Field(default_factory=TaskParams)


Model = Union[SystemModel, ShockedSystem]

# task -> (minimum, maximum) number of models
_MODEL_COUNTS: Dict[str, Tuple[int, int]] = {
    "EVAL": (1, 2),
    "ORDER_CHECK": (2, 2),
    "CONDITIONS": (1, 2),
    "THEOREM": (1, 2),
    "SAMPLE": (1, 1),
    "REPRO": (0, 0),
}


@dataclass
class LoadedScenario:
    scenario: Scenario
    models: List[Model]
    source: Optional[Path] = None

    @property
    def task(self) -> str:
        return self.scenario.task

    @property
    def params(self) -> TaskParams:
        return self.scenario.task_params

    def grid(self) -> Optional[GridSpec]:
        return GridSpec.parse(self.params.grid) if self.params.grid else None


def format_loc(loc: Sequence[Union[str, int]]) -> str:
    """("models", 0, "alphas", 2) -> "models[0].alphas[2]"."""
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out or "$"


def _schema_problems(exc: ValidationError) -> List[Tuple[str, str]]:
    return [(format_loc(err["loc"]), err["msg"]) for err in exc.errors()]


def _task_problems(scenario: Scenario) -> List[Tuple[str, str]]:
    problems = []
    lo, hi = _MODEL_COUNTS[scenario.task]
    count = len(scenario.models)
    if not lo <= count <= hi:
        problems.append(("models", f"{scenario.task} takes {lo}..{hi} models, got {count}"))
    params = scenario.task_params
    if scenario.task == "ORDER_CHECK" and params.order is None:
        problems.append(("task_params.order", "required for ORDER_CHECK"))
    if scenario.task == "THEOREM" and params.theorem_id is None:
        problems.append(("task_params.theorem_id", "required for THEOREM"))
    if scenario.task == "REPRO" and params.figure is None:
        problems.append(("task_params.figure", "required for REPRO"))
    if params.grid is not None:
        try:
            GridSpec.parse(params.grid)
        except PoOrdersError as exc:
            problems.append(("task_params.grid", str(exc)))
    return problems


def _build_models(scenario: Scenario) -> Tuple[List[Model], List[Tuple[str, str]]]:
    models, problems = [], []
    for i, raw in enumerate(scenario.models):
        try:
            models.append(model_from_dict(raw.model_dump()))
        except PoOrdersError as exc:
            problems.append((f"models[{i}]", str(exc)))
    return models, problems


def parse_scenario(data: Any, source: Optional[Path] = None) -> LoadedScenario:
    """Validate a decoded scenario document and build its systems."""
    try:
        scenario = Scenario.model_validate(data)
    except ValidationError as exc:
        raise ScenarioError(_schema_problems(exc)) from None
    problems = _task_problems(scenario)
    models, build_problems = _build_models(scenario)
    problems.extend(build_problems)
    if problems:
        raise ScenarioError(problems)
    logger.debug("scenario %s: task %s with %d models", source or "<inline>", scenario.task, len(models))
    return LoadedScenario(scenario, models, source)


def load_scenario(path: Union[str, Path]) -> LoadedScenario:
    """Read and validate a scenario file. OSError propagates unchanged."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([("$", f"invalid JSON: {exc.msg} at line {exc.lineno}")]) from None
    return parse_scenario(data, path)


def scenario_to_dict(task: str, models: Sequence[Model], **task_params: Any) -> Dict[str, Any]:
    """The JSON form of a scenario, for writing example files."""
    return {
        "spec_version": 1,
        "task": task,
        "models": [m.to_dict() for m in models],
        "task_params": {k: v for k, v in task_params.items() if v is not None},
    }
