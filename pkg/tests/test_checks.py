import math

import pytest

from po_orders.copulas import (
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
    make_generator,
)
from po_orders.errors import ParameterError
from po_orders.grids import GridSpec


def g(name, value=None):
    return make_generator(name, {} if value is None else {"theta": value})


@pytest.mark.parametrize(
    "gen, sense, verdict",
    [
        (g("independence"), Sense.CONVEX, Verdict.HOLDS),
        (g("independence"), Sense.CONCAVE, Verdict.HOLDS),
        (g("clayton", 0.5), Sense.CONVEX, Verdict.HOLDS),
        (g("clayton", 0.5), Sense.CONCAVE, Verdict.FAILS),
        (g("log_pow", 0.5), Sense.CONVEX, Verdict.HOLDS),
        (g("log_frac", 0.9), Sense.CONVEX, Verdict.HOLDS),
        (g("gh_exp", 2.0), Sense.CONVEX, Verdict.HOLDS),
        (g("gh_exp", 0.5), Sense.CONVEX, Verdict.FAILS),
        (g("gh_exp", 0.5), Sense.CONCAVE, Verdict.HOLDS),
        (g("sech_pow", 0.5), Sense.CONCAVE, Verdict.HOLDS),
        (g("sech_pow", 0.5), Sense.CONVEX, Verdict.FAILS),
        (g("gumbel_frailty", 0.9), Sense.CONCAVE, Verdict.HOLDS),
        (g("amh_like", -0.5), Sense.CONCAVE, Verdict.HOLDS),
    ],
    ids=str,
)
def test_log_shape(gen, sense, verdict):
    report = check_log_convexity(gen, sense)
    assert report.verdict is verdict
    if verdict is Verdict.FAILS:
        assert report.witness and all(len(w) == 3 for w in report.witness)


@pytest.mark.parametrize(
    "g1, g2, verdict",
    [
        # gh_exp(θ) into log_frac(θ) with θ <= 1
        (g("gh_exp", 0.5), g("log_frac", 0.5), Verdict.HOLDS),
        # log_frac(θ) into log_pow(θ) with θ > 1
        (g("log_frac", 2.0), g("log_pow", 2.0), Verdict.HOLDS),
        # gh_exp(θ1) into gh_exp(θ2) with 1 <= θ1 <= θ2
        (g("gh_exp", 1.5), g("gh_exp", 3.0), Verdict.HOLDS),
        (g("clayton", 0.5), g("clayton", 1.0), Verdict.HOLDS),
        (g("clayton", 1.0), g("clayton", 0.5), Verdict.FAILS),
        (g("sech_pow", 0.9), g("gh_exp", 0.3), Verdict.FAILS),
        (g("sech_pow", 0.2), g("gumbel_frailty", 0.9), Verdict.FAILS),
        (g("gumbel_frailty", 0.9), g("gumbel_frailty", 0.9), Verdict.HOLDS),
    ],
    ids=str,
)
def test_superadditive_composition(g1, g2, verdict):
    report = check_superadditive_composition(g1, g2)
    assert report.verdict is verdict
    if verdict is Verdict.FAILS:
        x, y = report.witness[0]
        assert x > 0 and y > 0


def test_superadditivity_on_a_narrow_custom_grid():
    report = check_superadditive_composition(g("clayton", 0.5), g("clayton", 1.0), GridSpec(0.1, 1.0, 5))
    assert report.verdict is Verdict.HOLDS
    assert "x 5 squared" in report.grid


@pytest.mark.parametrize(
    "gen, prop, verdict",
    [
        (g("amh_like", -0.5), RatioProperty.DECREASING, Verdict.HOLDS),
        (g("amh_like", -0.5), RatioProperty.CONVEX, Verdict.HOLDS),
        (g("amh_like", -0.5), RatioProperty.CONCAVE, Verdict.FAILS),
        (g("sech_pow", 1.0), RatioProperty.DECREASING, Verdict.HOLDS),
        (g("sech_pow", 1.0), RatioProperty.CONVEX, Verdict.HOLDS),
        (g("sech_pow", 0.2), RatioProperty.DECREASING, Verdict.FAILS),
        (g("clayton", 0.5), RatioProperty.DECREASING, Verdict.HOLDS),
        (g("clayton", 0.5), RatioProperty.CONVEX, Verdict.HOLDS),
        (g("clayton", 2.0), RatioProperty.CONCAVE, Verdict.HOLDS),
        (g("clayton", 2.0), RatioProperty.CONVEX, Verdict.FAILS),
    ],
    ids=str,
)
def test_ratio_shape(gen, prop, verdict):
    assert check_ratio_shape(gen, prop).verdict is verdict


@pytest.mark.parametrize(
    "gen, dim, verdict",
    [
        (g("clayton", 0.5), 3, Verdict.HOLDS),
        (g("log_frac", 0.9), 3, Verdict.HOLDS),
        (g("gh_exp", 2.0), 3, Verdict.HOLDS),
        (g("sech_pow", 1.0), 2, Verdict.HOLDS),
        (g("sech_pow", 1.0), 3, Verdict.FAILS),
        (g("gumbel_frailty", 0.9), 2, Verdict.HOLDS),
        (g("gumbel_frailty", 0.9), 3, Verdict.FAILS),
        (g("gumbel_frailty", 0.3), 3, Verdict.HOLDS),
        (g("amh_like", -0.5), 2, Verdict.HOLDS),
        # signs above order 3 are not evaluated
        (g("clayton", 0.5), 5, Verdict.INCONCLUSIVE),
        (g("sech_pow", 1.0), 5, Verdict.FAILS),
    ],
    ids=str,
)
def test_n_monotone(gen, dim, verdict):
    assert check_n_monotone(gen, dim).verdict is verdict


def test_n_monotone_needs_two_dimensions():
    with pytest.raises(ParameterError):
        check_n_monotone(g("clayton", 0.5), 1)


def test_catalog_generators_are_valid(catalog_generator):
    assert check_generator_validity(catalog_generator).verdict is not Verdict.FAILS


@pytest.mark.parametrize("gen", [g("independence"), g("clayton", 0.5), g("sech_pow", 0.5), g("gh_exp", 2.0), g("amh_like", -0.5)], ids=str)
def test_validity_with_resolved_tail(gen):
    assert check_generator_validity(gen).verdict is Verdict.HOLDS


@pytest.mark.parametrize("gen", [g("log_frac", 0.9), g("log_pow", 0.5), g("log_pow", 2.0)], ids=str)
def test_slow_tails_are_resolved_on_the_log_scale(gen):
    # phi_inv(1e-10) overflows a float here, so the t-scale hint sits at its cap
    assert gen.domain_hint == 1e12
    assert math.isfinite(gen.log_domain_hint)
    assert check_generator_validity(gen).verdict is Verdict.HOLDS


def test_tail_beyond_the_log_scale_is_not_resolved():
    # u^-50 overflows at u = 1e-10, so even log phi_inv is infinite
    gen = g("log_pow", 50.0)
    assert gen.log_domain_hint == math.inf
    report = check_generator_validity(gen)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert "tail not resolved" in report.note


def test_degenerate_grid_is_rejected():
    with pytest.raises(ParameterError):
        check_log_convexity(g("clayton", 0.5), Sense.CONVEX, GridSpec(0.1, 1.0, 2))


def test_failing_report_needs_witnesses():
    with pytest.raises(ValueError):
        CheckReport("bare", Verdict.FAILS)
    with pytest.raises(ValueError):
        CheckReport("noisy", Verdict.HOLDS, [[1.0]])


def test_combinators():
    ok = CheckReport("ok", Verdict.HOLDS)
    bad = CheckReport("bad", Verdict.FAILS, [[1.0]])
    unsure = CheckReport("unsure", Verdict.INCONCLUSIVE)

    assert all_of("both", [ok, ok]).verdict is Verdict.HOLDS
    assert all_of("both", [ok, unsure]).verdict is Verdict.INCONCLUSIVE
    failed = all_of("both", [unsure, bad])
    assert failed.verdict is Verdict.FAILS and failed.witness == [[1.0]] and failed.note == "bad"

    assert any_of("either", [bad, ok]).verdict is Verdict.HOLDS
    assert any_of("either", [bad, unsure]).verdict is Verdict.INCONCLUSIVE
    assert any_of("either", [bad, bad]).verdict is Verdict.FAILS
    assert any_of("either", []).verdict is Verdict.INCONCLUSIVE


def test_report_dict_form():
    data = check_log_convexity(g("clayton", 0.5), Sense.CONCAVE).to_dict()
    assert data["verdict"] == "FAILS"
    assert data["name"] == "log-concave clayton(a=0.5)"
    assert data["tolerance"] == pytest.approx(1e-9)
