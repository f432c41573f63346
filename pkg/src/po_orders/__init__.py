"""
PO Orders
Series and parallel systems of dependent proportional-odds components:
system laws, stochastic-order checks and the theorem harness
"""

__version__ = "0.1.0-alpha"
__author__ = "PO Orders Contributors"
__description__ = "Lifetimes of series/parallel systems with dependent proportional-odds components"

from .logging_utils import _ensure_logger

_ensure_logger()

from .copulas import GeneratorSpec, list_generators, make_generator  # noqa: E402
from .grids import GridSpec  # noqa: E402
from .lifetimes import Exponential, POComponent, Tabulated, Weibull, make_baseline  # noqa: E402
from .orders import Extreme, OrderKind, check_order, majorizes, run_theorem  # noqa: E402
from .systems import ShockedSystem, SystemModel  # noqa: E402

__all__ = [
    "Exponential",
    "Extreme",
    "GeneratorSpec",
    "GridSpec",
    "OrderKind",
    "POComponent",
    "ShockedSystem",
    "SystemModel",
    "Tabulated",
    "Weibull",
    "check_order",
    "list_generators",
    "make_baseline",
    "make_generator",
    "majorizes",
    "run_theorem",
    "__version__",
    "__author__",
    "__description__",
]
