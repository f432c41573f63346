"""
Archimedean copula generators
Catalog, evaluation and hypothesis checks for the generators φ
"""

from .checks import (
    CheckReport,
    RatioProperty,
    Sense,
    Verdict,
    all_of,
    any_of,
    check_generator_validity,
    check_log_convexity,
    check_n_monotone,
    check_ratio_shape,
    check_superadditive_composition,
    default_shape_grid,
    default_superadd_grid,
)
from .dependence import kendall_tau
from .generators import (
    GeneratorFamily,
    GeneratorSpec,
    list_generators,
    make_generator,
    phi,
    phi_inv,
    register_generator,
)

__all__ = [
    "CheckReport",
    "GeneratorFamily",
    "GeneratorSpec",
    "RatioProperty",
    "Sense",
    "Verdict",
    "all_of",
    "any_of",
    "check_generator_validity",
    "check_log_convexity",
    "check_n_monotone",
    "check_ratio_shape",
    "check_superadditive_composition",
    "default_shape_grid",
    "default_superadd_grid",
    "kendall_tau",
    "list_generators",
    "make_generator",
    "phi",
    "phi_inv",
    "register_generator",
]
