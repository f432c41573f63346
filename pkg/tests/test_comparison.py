import numpy as np
import pytest

from po_orders.copulas import Verdict, make_generator
from po_orders.errors import ParameterError
from po_orders.grids import GridSpec
from po_orders.orders import Extreme, OrderKind, OrderVerdict, check_order, default_order_grid
from po_orders.orders.comparison import _check_ratio_and_rates
from po_orders.repro import get_figure
from po_orders.systems import ShockedSystem, SystemModel


@pytest.mark.parametrize("order", list(OrderKind))
@pytest.mark.parametrize("which", list(Extreme))
def test_a_model_is_ordered_with_itself(clayton_pair, order, which):
    x, _ = clayton_pair
    assert check_order(x, x, order, which).verdict is Verdict.HOLDS


def test_weakly_supermajorized_odds_give_usual_order(clayton_pair):
    x, y = clayton_pair
    assert check_order(x, y, OrderKind.ST, Extreme.SERIES).verdict is Verdict.HOLDS
    reverse = check_order(y, x, OrderKind.ST, Extreme.SERIES)
    assert reverse.verdict is Verdict.FAILS
    t, lhs, rhs = reverse.witnesses[0]
    assert lhs > rhs and t > 0
    assert len(reverse.witnesses) <= 10


def test_hazard_rate_order_implies_usual_order(weibull):
    g = make_generator("sech_pow", {"theta": 1.0})
    x = SystemModel(weibull, (0.2, 0.4, 0.6), g)
    y = SystemModel(weibull, (0.35, 0.55, 0.95), g)
    assert check_order(x, y, OrderKind.HR, Extreme.SERIES).verdict is Verdict.HOLDS
    assert check_order(x, y, OrderKind.ST, Extreme.SERIES).verdict is Verdict.HOLDS


@pytest.mark.parametrize(
    "figure_id, order, which",
    [
        ("F1", OrderKind.ST, Extreme.SERIES),
        ("F2a", OrderKind.HR, Extreme.SERIES),
        ("F3a", OrderKind.ST, Extreme.PARALLEL),
        ("F4a", OrderKind.RHR, Extreme.PARALLEL),
    ],
)
def test_crossing_curves_fail(figure_id, order, which):
    spec = get_figure(figure_id)
    verdict = check_order(spec.x, spec.y, order, which, spec.grid())
    assert verdict.verdict is Verdict.FAILS
    assert verdict.witnesses


def test_saturated_grid_is_inconclusive(clayton_pair):
    x, y = clayton_pair
    verdict = check_order(x, y, OrderKind.HR, Extreme.SERIES, GridSpec(200.0, 300.0, 20))
    assert verdict.verdict is Verdict.INCONCLUSIVE
    assert "fewer than 2" in verdict.note


def test_formulations_that_disagree_are_inconclusive():
    t = np.linspace(1.0, 2.0, 5)
    level_a = np.exp(-t)
    verdict = _check_ratio_and_rates(
        OrderKind.HR, t, level_a, 2.0 * level_a, np.ones(5), np.full(5, 1.5), True, 1e-9, "synthetic"
    )
    assert verdict.verdict is Verdict.INCONCLUSIVE
    assert "rate inequality" in verdict.note


class TestShocked:
    def test_smaller_survival_mass_is_smaller(self, clayton_pair):
        x, y = clayton_pair
        low, high = ShockedSystem(x, (0.5, 0.6, 0.7)), ShockedSystem(y, (0.9, 0.9, 0.9))
        assert check_order(low, high, OrderKind.ST, Extreme.SERIES).verdict is Verdict.HOLDS
        assert check_order(high, low, OrderKind.ST, Extreme.SERIES).verdict is Verdict.FAILS

    def test_shocks_do_not_change_the_hazard(self, clayton_pair):
        x, _ = clayton_pair
        a, b = ShockedSystem(x, (0.5, 0.5, 0.5)), ShockedSystem(x, (1.0, 1.0, 1.0))
        assert check_order(a, b, OrderKind.HR, Extreme.SERIES).verdict is Verdict.HOLDS
        assert check_order(b, a, OrderKind.HR, Extreme.SERIES).verdict is Verdict.HOLDS

    def test_parallel_is_rejected(self, clayton_pair):
        x, y = clayton_pair
        with pytest.raises(ParameterError):
            check_order(ShockedSystem(x, (1.0, 1.0, 1.0)), ShockedSystem(y, (1.0, 1.0, 1.0)), OrderKind.ST, Extreme.PARALLEL)


def test_default_grid_spans_the_bulk(clayton_pair, weibull):
    grid = default_order_grid(*clayton_pair)
    assert grid.count == 400 and grid.spacing == "log"
    assert grid.lo == pytest.approx(weibull.quantile(5e-4))
    assert grid.hi == pytest.approx(weibull.quantile(1 - 5e-4))


def test_failing_verdict_needs_witnesses():
    with pytest.raises(ValueError):
        OrderVerdict(OrderKind.ST, Verdict.FAILS)


def test_verdict_dict_form(clayton_pair):
    data = check_order(*clayton_pair, OrderKind.ST, Extreme.SERIES).to_dict()
    assert data["order"] == "ST" and data["verdict"] == "HOLDS"
    assert data["grid"].startswith("log[")
