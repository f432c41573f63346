import csv
import math
from dataclasses import replace

import numpy as np
import pytest

from po_orders.copulas import Verdict, kendall_tau, make_generator
from po_orders.errors import ParameterError
from po_orders.lifetimes import POComponent, po_survival
from po_orders.montecarlo import (
    Coupling,
    SampleBatch,
    Statistic,
    _block_rng,
    _conditional_uniforms,
    agreement_times,
    analytic_curve,
    empirical_kendall_tau,
    empirical_survival,
    mc_agreement,
    sample,
    sample_shocked,
    write_batch_csv,
)
from po_orders.settings import NumericsConfig, reset_settings
from po_orders.systems import ShockedSystem, SystemModel

from .conftest import CATALOG_CASES

# the conditional sampler is only a copula sampler where phi is n-monotone
_THREE_DIM_OK = {"independence", "clayton", "log_frac", "log_pow"}


def _dimension(name, params):
    if name in _THREE_DIM_OK or (name == "gh_exp" and params["theta"] >= 1.0):
        return 3
    return 2


def test_same_seed_same_draws(clayton_pair):
    x, _ = clayton_pair
    a, b = sample(x, 500, seed=5), sample(x, 500, seed=5)
    np.testing.assert_array_equal(a.draws, b.draws)
    assert not np.array_equal(a.draws, sample(x, 500, seed=6).draws)


@pytest.mark.parametrize("name, params", [("clayton", {"a": 0.5}), ("amh_like", {"theta": -0.5})])
def test_draws_do_not_depend_on_worker_count(weibull, name, params):
    reset_settings(replace(NumericsConfig(), mc_block_size=300))
    m = SystemModel(weibull, (0.5, 2.0), make_generator(name, params))
    one = sample(m, 1000, seed=9, workers=1)
    many = sample(m, 1000, seed=9, workers=4)
    np.testing.assert_array_equal(one.draws, many.draws)


def test_couplings_share_uniforms(weibull, independence):
    m = SystemModel(weibull, (1.0, 1.0), independence)
    surv = sample(m, 200, seed=1)
    cdf = sample(m, 200, seed=1, coupling=Coupling.CDF)
    assert cdf.coupling is Coupling.CDF
    # with unit odds ratios the two maps are reflections of the same uniforms
    np.testing.assert_allclose(weibull.survival(surv.draws) + weibull.survival(cdf.draws), 1.0, atol=1e-12)


@pytest.mark.parametrize(
    "draws",
    [np.zeros((0, 2)), np.ones(5), np.array([[1.0, -0.5]])],
    ids=["empty", "flat", "negative"],
)
def test_bad_batches(clayton_pair, draws):
    with pytest.raises(ParameterError):
        SampleBatch(draws, 0, clayton_pair[0])


def test_size_must_be_positive(clayton_pair):
    with pytest.raises(ParameterError):
        sample(clayton_pair[0], 0, seed=1)


def test_generic_sampler_is_capped(weibull):
    m = SystemModel(weibull, (1.0,) * 5, make_generator("amh_like", {"theta": -0.5}))
    with pytest.raises(ParameterError):
        sample(m, 10, seed=1)


def test_fast_paths_take_any_dimension(weibull, clayton):
    batch = sample(SystemModel(weibull, (1.0,) * 6, clayton), 50, seed=2)
    assert batch.draws.shape == (50, 6)


def test_empirical_extremes(clayton_pair):
    draws = np.full((4, 3), 5.0)
    batch = SampleBatch(draws, 0, clayton_pair[0])
    assert empirical_survival(batch, Statistic.MIN, 4.0) == 1.0
    assert empirical_survival(batch, Statistic.MIN, 6.0) == 0.0
    assert empirical_survival(batch, Statistic.MAX, 0.0) == 0.0
    np.testing.assert_array_equal(empirical_survival(batch, Statistic.MAX, [4.0, 5.0]), [0.0, 1.0])


def test_mismatched_coupling_is_rejected(clayton_pair):
    batch = sample(clayton_pair[0], 100, seed=3)
    with pytest.raises(ParameterError, match="CDF coupled"):
        mc_agreement(batch, Statistic.MAX)


def test_shocked_max_has_no_analytic_curve(clayton_pair):
    s = ShockedSystem(clayton_pair[0], (0.5, 0.5, 0.5))
    with pytest.raises(ParameterError):
        analytic_curve(s, Statistic.MAX)


def test_shocks_leave_an_atom_at_zero(weibull, clayton):
    s = ShockedSystem(SystemModel(weibull, (1.0, 2.0), clayton), (0.5, 0.5))
    batch = sample_shocked(s, 20000, seed=4)
    alive = empirical_survival(batch, Statistic.MIN, 0.0)
    assert abs(alive - 0.25) < 4 * np.sqrt(0.25 * 0.75 / 20000)


def test_unit_shocks_reduce_to_sample(clayton_pair):
    x, _ = clayton_pair
    shocked = sample_shocked(ShockedSystem(x, (1.0, 1.0, 1.0)), 300, seed=8)
    np.testing.assert_array_equal(shocked.draws, sample(x, 300, seed=8).draws)


def test_agreement_report(clayton_pair):
    batch = sample(clayton_pair[0], 5000, seed=10)
    report = mc_agreement(batch, Statistic.MIN, n_sigma=4.0)
    data = report.to_dict()
    assert data["statistic"] == "MIN" and data["size"] == 5000
    assert len(data["rows"]) == len(agreement_times(clayton_pair[0]))
    assert report.verdict is Verdict.HOLDS


def test_csv_export(tmp_path, clayton_pair):
    batch = sample(clayton_pair[0], 20, seed=1)
    path = write_batch_csv(batch, tmp_path / "draws.csv")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x1", "x2", "x3"]
    assert len(rows) == 21
    np.testing.assert_array_equal(np.array(rows[1:], dtype=float), batch.draws)
    assert b"\r\n" not in path.read_bytes()


@pytest.mark.slow
@pytest.mark.parametrize("name, params", CATALOG_CASES, ids=[c[0] + "-" + "-".join(map(str, c[1].values())) for c in CATALOG_CASES])
def test_extremes_match_the_analytic_laws(weibull, name, params):
    n = _dimension(name, params)
    m = SystemModel(weibull, (0.5, 1.0, 2.0)[:n], make_generator(name, params))
    series = mc_agreement(sample(m, 100_000, seed=2024), Statistic.MIN, n_sigma=4.0)
    parallel = mc_agreement(sample(m, 100_000, seed=2024, coupling=Coupling.CDF), Statistic.MAX, n_sigma=4.0)
    assert series.verdict is Verdict.HOLDS, series.rows
    assert parallel.verdict is Verdict.HOLDS, parallel.rows


@pytest.mark.slow
def test_marginals_match(weibull):
    m = SystemModel(weibull, (0.5, 2.0), make_generator("gh_exp", {"theta": 0.5}))
    batch = sample(m, 100_000, seed=77)
    ts = agreement_times(m)
    for i, alpha in enumerate(m.alphas):
        expected = np.asarray(po_survival(POComponent(weibull, alpha), ts))
        observed = (batch.draws[:, i][:, None] > ts[None, :]).mean(axis=0)
        se = np.sqrt(expected * (1 - expected) / batch.size)
        assert np.all(np.abs(observed - expected) <= 4 * se)


@pytest.mark.slow
def test_empirical_kendall_tau(weibull, clayton, independence):
    dependent = sample(SystemModel(weibull, (1.0, 3.0), clayton), 100_000, seed=12)
    assert empirical_kendall_tau(dependent) == pytest.approx(kendall_tau(clayton), abs=0.02)
    free = sample(SystemModel(weibull, (1.0, 3.0), independence), 100_000, seed=12)
    assert abs(empirical_kendall_tau(free)) < 0.01


@pytest.mark.parametrize("size", [20_000, pytest.param(100_000, marks=pytest.mark.slow)])
def test_conditional_sampler_reaches_the_lower_tail(size):
    # phi_inv overflows for log_frac once u drops below ~0.02; the bisection runs in log u
    g = make_generator("log_frac", {"theta": 0.9})
    u = _conditional_uniforms(g, _block_rng(2024, 0), size, 3)
    assert np.all((u > 0) & (u < 1))
    assert np.all(u.min(axis=0) < 1e-3)
    level = 0.05
    for dim in (2, 3):
        expected = g.phi_at_log(math.log(dim) + g.log_phi_inv(level))
        observed = np.mean(np.all(u[:, :dim] <= level, axis=1))
        assert abs(observed - expected) <= 4 * math.sqrt(expected * (1 - expected) / size)
    assert g.phi_at_log(math.log(3) + g.log_phi_inv(level)) == pytest.approx(0.04712, abs=5e-5)
