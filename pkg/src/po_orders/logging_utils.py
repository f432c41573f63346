import json
import logging
import pathlib
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from typing import Any, Dict

import numpy as np
from rich.console import Console
from rich.logging import RichHandler

from .settings import get_settings

ROOT_LOGGER = "po_orders"


def _configured_level() -> int:
    level = logging.getLevelName(get_settings().log_level.upper())
    return level if isinstance(level, int) else logging.INFO


def _ensure_logger() -> logging.Logger:
    logger = logging.getLogger(ROOT_LOGGER)
    if not any(isinstance(h, RotatingFileHandler) for h in logger.handlers):
        config = get_settings()
        log_path = pathlib.Path(config.log_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(log_path, maxBytes=2_000_000, backupCount=3, encoding="utf-8")
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s %(message)s"))
        logger.addHandler(handler)
        logger.setLevel(_configured_level())
    return logger


def enable_console_logging(verbose: bool = False) -> logging.Handler:
    """Mirror package log records to stderr; DEBUG when verbose, WARNING otherwise."""
    logger = _ensure_logger()
    for h in list(logger.handlers):
        if isinstance(h, RichHandler):
            logger.removeHandler(h)
    handler = RichHandler(console=Console(stderr=True), show_path=False, markup=False)
    handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else _configured_level())
    return handler


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def audit_log(event: str, details: Dict[str, Any]) -> None:
    logger = _ensure_logger()
    ts = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
    payload = {"event": event, "ts": ts, **details}
    logger.info("AUDIT %s", json.dumps(payload, ensure_ascii=False, default=_json_default))
