import json
import logging

import numpy as np
import pytest

from po_orders.errors import ParameterError
from po_orders.grids import GridSpec
from po_orders.logging_utils import ROOT_LOGGER, audit_log, enable_console_logging
from po_orders.settings import NumericsConfig, get_settings, reset_settings


def test_defaults():
    config = get_settings()
    assert config.order_grid_points == 400
    assert config.shape_grid_points == 512
    assert config.csv_digits == 17


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("PO_ORDERS_ORDER_GRID_POINTS", "800")
    monkeypatch.setenv("PO_ORDERS_SHAPE_TOLERANCE", "1e-7")
    config = reset_settings()
    assert config.order_grid_points == 800
    assert config.shape_tolerance == 1e-7
    assert get_settings() is config


@pytest.mark.parametrize("raw", ["many", "-5", "0"])
def test_bad_overrides_are_ignored(monkeypatch, raw):
    monkeypatch.setenv("PO_ORDERS_MC_WORKERS", raw)
    assert reset_settings().mc_workers == NumericsConfig().mc_workers


def test_explicit_config():
    config = reset_settings(NumericsConfig(mc_block_size=10))
    assert get_settings().mc_block_size == 10
    assert config.to_dict()["mc_block_size"] == 10


def test_audit_records_are_json(caplog):
    with caplog.at_level(logging.INFO, logger="po_orders"):
        audit_log("artifact_written", {"task": "REPRO", "path": "F1.csv"})
    message = caplog.records[-1].getMessage()
    assert message.startswith("AUDIT ")
    payload = json.loads(message[len("AUDIT "):])
    assert payload["event"] == "artifact_written" and payload["ts"].endswith("Z")


def test_audit_records_serialize_numpy(caplog):
    with caplog.at_level(logging.INFO, logger="po_orders"):
        audit_log("task_run", {"exit_code": np.int64(2), "alphas": np.array([0.5, 1.0])})
    payload = json.loads(caplog.records[-1].getMessage()[len("AUDIT "):])
    assert payload["exit_code"] == 2 and payload["alphas"] == [0.5, 1.0]


def test_console_logging_levels():
    logger = logging.getLogger(ROOT_LOGGER)
    handler = enable_console_logging(verbose=True)
    assert handler.level == logging.DEBUG and logger.level == logging.DEBUG
    quiet = enable_console_logging(verbose=False)
    assert handler not in logger.handlers and quiet.level == logging.WARNING
    assert logger.level == logging.INFO


def test_unknown_log_level_falls_back_to_info(monkeypatch):
    monkeypatch.setenv("PO_ORDERS_LOG_LEVEL", "loud")
    reset_settings()
    enable_console_logging(verbose=False)
    assert logging.getLogger(ROOT_LOGGER).level == logging.INFO


class TestGrid:
    def test_parse(self):
        grid = GridSpec.parse("0.5:4:8")
        assert grid.points()[0] == pytest.approx(0.5) and grid.points()[-1] == pytest.approx(4.0)
        assert grid.describe() == "log[0.5, 4] x 8"

    @pytest.mark.parametrize("text", ["1:2", "a:b:c", "0:1:5", "2:1:5", "1:2:0"])
    def test_rejects(self, text):
        with pytest.raises(ParameterError):
            GridSpec.parse(text)

    def test_linear(self):
        grid = GridSpec(0.0, 1.0, 5, spacing="linear")
        assert list(grid.points()) == [0.0, 0.25, 0.5, 0.75, 1.0]
