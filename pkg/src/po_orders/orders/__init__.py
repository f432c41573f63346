"""
Stochastic orders
Majorization preorders, order verdicts between systems and the theorem harness
"""

from .comparison import Extreme, OrderKind, OrderVerdict, check_order, default_order_grid
from .fuzz import fuzz_theorem, p_pair, random_scenario, shock_pair, w_pair
from .majorization import MajorizationMode, first_violation, majorizes
from .theorems import TheoremReport, TheoremSpec, get_theorem, list_theorems, majorization_report, run_theorem

__all__ = [
    "Extreme",
    "MajorizationMode",
    "OrderKind",
    "OrderVerdict",
    "TheoremReport",
    "TheoremSpec",
    "check_order",
    "default_order_grid",
    "first_violation",
    "fuzz_theorem",
    "get_theorem",
    "list_theorems",
    "majorization_report",
    "majorizes",
    "p_pair",
    "random_scenario",
    "run_theorem",
    "shock_pair",
    "w_pair",
]
