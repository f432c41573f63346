"""
Numerical settings

Every tolerance, grid size and sampling knob used by the package lives in
NumericsConfig. Defaults can be overridden through PO_ORDERS_<FIELD>
environment variables (for example PO_ORDERS_ORDER_GRID_POINTS=800).
"""

import logging
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

ENV_PREFIX = "PO_ORDERS_"


@dataclass
class NumericsConfig:
    """Constants shared by the generator checks, system laws and samplers."""

    # Generator evaluation
    phi_floor: float = 1e-12
    domain_level: float = 1e-10
    domain_cap: float = 1e12
    fd_step: float = 1e-5

    # Shape checks on generators
    shape_grid_lo: float = 1e-4
    shape_grid_points: int = 512
    default_domain: float = 50.0
    shape_tolerance: float = 1e-9
    superadd_grid_lo: float = 1e-3
    superadd_grid_points: int = 64

    # Order comparisons
    order_grid_points: int = 400
    order_tail_mass: float = 5e-4
    order_tolerance: float = 1e-9
    saturation: float = 1e-10
    majorization_slack: float = 1e-12

    # Monte Carlo
    bisect_lo: float = 1e-12
    bisect_tol: float = 1e-10
    bisect_max_iter: int = 100
    mc_block_size: int = 65536
    mc_workers: int = 4

    # Output
    csv_digits: int = 17
    log_path: str = "po_orders.log"
    log_level: str = "INFO"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _coerce(raw: str, default: Any) -> Any:
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def load_from_environment() -> NumericsConfig:
    """Build a config from defaults plus any PO_ORDERS_* overrides."""
    config = NumericsConfig()
    for f in fields(config):
        raw = os.getenv(ENV_PREFIX + f.name.upper())
        if raw is None:
            continue
        default = getattr(config, f.name)
        try:
            value = _coerce(raw, default)
        except ValueError:
            logger.warning("Ignoring %s%s=%r: not a valid %s", ENV_PREFIX, f.name.upper(), raw, type(default).__name__)
            continue
        if isinstance(value, (int, float)) and not isinstance(value, bool) and value <= 0:
            logger.warning("Ignoring %s%s=%r: must be positive", ENV_PREFIX, f.name.upper(), raw)
            continue
        setattr(config, f.name, value)
    return config


# Global settings instance
_settings: Optional[NumericsConfig] = None


def get_settings() -> NumericsConfig:
    """Get the global numerics configuration"""
    global _settings
    if _settings is None:
        _settings = load_from_environment()
    return _settings


def reset_settings(config: Optional[NumericsConfig] = None) -> NumericsConfig:
    """Replace the global configuration (reloads the environment when config is None)."""
    global _settings
    _settings = config if config is not None else load_from_environment()
    return _settings
