"""
po-orders command line

JSON reports go to stdout; progress and errors go to stderr through rich.
Exit codes: 0 HOLDS or success, 1 usage or IO error, 2 FAILS, 3 INCONCLUSIVE.
"""

import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click
import typer
from rich.console import Console

try:  # typer >= 0.26 vendors its own copy of click
    from typer._click import exceptions as _typer_click_exc
except ImportError:  # older typer uses click directly
    _typer_click_exc = click.exceptions

from .errors import PoOrdersError, ScenarioError
from .grids import GridSpec
from .logging_utils import audit_log, enable_console_logging
from .scenario import LoadedScenario, load_scenario
from .tasks import (
    EXIT_ERROR,
    TaskResult,
    conditions_task,
    eval_task,
    fuzz_task,
    jsonable,
    order_check_task,
    repro_task,
    run_scenario,
    sample_task,
    theorem_task,
)

logger = logging.getLogger(__name__)
console = Console(stderr=True)

app = typer.Typer(
    help="Lifetimes of series/parallel systems with dependent proportional-odds components",
    add_completion=False,
    no_args_is_help=True,
)

ScenarioOpt = typer.Option(..., "--scenario", "-s", help="Scenario JSON file", exists=True, dir_okay=False)
OutOpt = typer.Option(None, "--out", "-o", help="Directory for CSV/SVG artifacts")
GridOpt = typer.Option(None, "--grid", help="Evaluation grid lo:hi:count (log-spaced)")


@app.callback()
def _main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug messages to stderr")):
    enable_console_logging(verbose)


def _emit(result: TaskResult, source: Optional[Path] = None) -> None:
    typer.echo(json.dumps(jsonable(result.payload), indent=2, allow_nan=False))
    audit_log("task_run", {"task": result.task, "scenario": source, "exit_code": result.exit_code})
    colour = {0: "green", 2: "red", 3: "yellow"}.get(result.exit_code, "white")
    console.print(f"[{colour}]{result.task}: exit {result.exit_code}[/{colour}]")
    if result.files:
        console.print(f"wrote {len(result.files)} file(s)")
    raise typer.Exit(result.exit_code)


def _grid(text: Optional[str], loaded: LoadedScenario) -> Optional[GridSpec]:
    return GridSpec.parse(text) if text else loaded.grid()


@app.command("eval")
def eval_cmd(scenario: Path = ScenarioOpt, grid: Optional[str] = GridOpt, out: Optional[Path] = OutOpt):
    """Tabulate system survival, cdf and hazards for each model."""
    loaded = load_scenario(scenario)
    _emit(eval_task(loaded.models, _grid(grid, loaded), out), scenario)


@app.command("order-check")
def order_check_cmd(
    scenario: Path = ScenarioOpt,
    order: Optional[str] = typer.Option(None, "--order", help="ST, HR or RHR"),
    which: Optional[str] = typer.Option(None, "--which", help="SERIES or PARALLEL"),
    grid: Optional[str] = GridOpt,
):
    """Decide whether model A is smaller than model B in a stochastic order."""
    loaded = load_scenario(scenario)
    order = order or loaded.params.order
    if order is None:
        raise click.UsageError("no order given (use --order or task_params.order)")
    _emit(order_check_task(loaded.models, order, which or loaded.params.which, _grid(grid, loaded)), scenario)


@app.command("conditions")
def conditions_cmd(scenario: Path = ScenarioOpt):
    """Run every generator and vector hypothesis check on the scenario."""
    loaded = load_scenario(scenario)
    _emit(conditions_task(loaded.models), scenario)


@app.command("theorem")
def theorem_cmd(
    scenario: Path = ScenarioOpt,
    theorem: Optional[str] = typer.Option(None, "--theorem", "-t", help="Theorem id, e.g. T3.2"),
    alpha_hat: Optional[float] = typer.Option(None, "--alpha-hat", help="Common odds ratio for C3.3"),
    grid: Optional[str] = GridOpt,
):
    """Check a theorem's hypotheses and conclusion on the scenario.

    Exits 2 only when every hypothesis holds and the conclusion does not, 3 when
    the hypotheses are undecided, 0 otherwise (including vacuous runs).
    """
    loaded = load_scenario(scenario)
    theorem = theorem or loaded.params.theorem_id
    if theorem is None:
        raise click.UsageError("no theorem given (use --theorem or task_params.theorem_id)")
    alpha_hat = alpha_hat if alpha_hat is not None else loaded.params.alpha_hat
    _emit(theorem_task(loaded.models, theorem, alpha_hat, _grid(grid, loaded)), scenario)


@app.command("sample")
def sample_cmd(
    scenario: Path = ScenarioOpt,
    size: Optional[int] = typer.Option(None, "--size", min=1, help="Number of draws"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    out: Optional[Path] = OutOpt,
):
    """Monte Carlo draws checked against the analytic series/parallel laws."""
    loaded = load_scenario(scenario)
    if len(loaded.models) != 1:
        raise click.UsageError("sample takes a scenario with exactly one model")
    size = size or loaded.params.size
    seed = seed if seed is not None else loaded.params.seed
    _emit(sample_task(loaded.models[0], size, seed, out), scenario)


@app.command("repro")
def repro_cmd(
    figure: str = typer.Option("all", "--figure", "-f", help="F1, F2a, F2b, F3a, F3b, F4a, F4b or all"),
    out: Optional[Path] = OutOpt,
):
    """Reproduce the counterexample figures and report curve crossings."""
    _emit(repro_task(figure, out))


@app.command("run")
def run_cmd(scenario: Path = ScenarioOpt, out: Optional[Path] = OutOpt):
    """Run whatever task the scenario file names."""
    _emit(run_scenario(scenario, out), scenario)


@app.command("fuzz")
def fuzz_cmd(
    theorem: Optional[List[str]] = typer.Option(None, "--theorem", "-t", help="Theorem id (repeatable); default all"),
    count: int = typer.Option(50, "--count", "-n", min=1, help="Scenarios per theorem"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
):
    """Randomized theorem scenarios; exit 2 if any is inconsistent."""
    _emit(fuzz_task(theorem or [], count, seed))


def main(argv: Optional[List[str]] = None) -> int:
    try:
        rv = app(args=argv, prog_name="po-orders", standalone_mode=False)
    except ScenarioError as exc:
        console.print("[red]Scenario invalid:[/red]")
        for path, msg in exc.problems:
            console.print(f"  • {path}: {msg}")
        return EXIT_ERROR
    except (PoOrdersError, OSError) as exc:
        console.print(f"[red]Error: {exc}[/red]")
        return EXIT_ERROR
    except (click.ClickException, _typer_click_exc.ClickException) as exc:
        exc.show()
        return EXIT_ERROR
    except (click.exceptions.Abort, _typer_click_exc.Abort):
        console.print("[red]Aborted[/red]")
        return EXIT_ERROR
    return rv if isinstance(rv, int) else 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
