"""Shared fixtures: catalog generators, baselines and the figure models."""

import os
import tempfile
from pathlib import Path

# The package attaches its rotating log file on import; keep it out of the checkout.
os.environ.setdefault("PO_ORDERS_LOG_PATH", str(Path(tempfile.gettempdir()) / "po_orders_tests.log"))

import pytest  # noqa: E402

from po_orders.copulas import make_generator  # noqa: E402
from po_orders.lifetimes import Exponential, Weibull  # noqa: E402
from po_orders.repro import get_figure  # noqa: E402
from po_orders.settings import reset_settings  # noqa: E402
from po_orders.systems import SystemModel  # noqa: E402

# One representative parameter per catalog family.
CATALOG_CASES = [
    ("independence", {}),
    ("gh_exp", {"theta": 0.5}),
    ("gh_exp", {"theta": 2.0}),
    ("log_frac", {"theta": 0.9}),
    ("log_pow", {"theta": 0.5}),
    ("sech_pow", {"theta": 0.5}),
    ("gumbel_frailty", {"theta": 0.9}),
    ("clayton", {"a": 0.5}),
    ("amh_like", {"theta": -0.5}),
]


def _case_id(case):
    name, params = case
    return name + "".join(f"-{v:g}" for v in params.values())


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts from the environment defaults."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(params=CATALOG_CASES, ids=_case_id)
def catalog_generator(request):
    name, params = request.param
    return make_generator(name, params)


@pytest.fixture
def clayton():
    return make_generator("clayton", {"a": 0.5})


@pytest.fixture
def independence():
    return make_generator("independence")


@pytest.fixture
def weibull():
    return Weibull(scale=1.0, shape=1.5)


@pytest.fixture
def exponential():
    return Exponential(rate=1.0)


@pytest.fixture(params=[Weibull(1.0, 1.5), Weibull(0.5, 2.0), Exponential(0.8)], ids=["weibull-1.5", "weibull-2", "exp-0.8"])
def baseline(request):
    return request.param


@pytest.fixture
def clayton_pair(weibull, clayton):
    """α ⪰_w β under one Clayton copula, so X1:n <=st Y1:n."""
    x = SystemModel(weibull, (0.2, 0.4, 0.6), clayton)
    y = SystemModel(weibull, (0.35, 0.55, 0.95), clayton)
    return x, y


@pytest.fixture
def figure_models():
    def models(figure_id):
        spec = get_figure(figure_id)
        return spec.x, spec.y

    return models
