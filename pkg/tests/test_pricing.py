import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tranchelab.defaults import cohort_batch
from tranchelab.errors import EmptyInput, PdOutOfRange
from tranchelab.pricing import (
    RESIDUAL_PREMIUM, cds_pipeline, cds_quotes, cds_spread, cds_scenario, country_expected_losses,
    expected_loss, hazard_rate,
)
from tranchelab.scenario import default_scenario

from conftest import closed_form_country, recession_share, solo

Q = recession_share()


def test_hazard_examples():
    assert hazard_rate(0.0, 10) == 0.0
    assert hazard_rate(1 - math.exp(-1), 10) == pytest.approx(0.1, abs=1e-15)
    # mpmath at 30 digits: -ln(0.897) / 10
    assert hazard_rate(0.103, 10) == pytest.approx(0.0108699416923340934, abs=1e-16)


def test_hazard_rejects_certain_default():
    with pytest.raises(PdOutOfRange):
        hazard_rate(1.0, 5)
    with pytest.raises(PdOutOfRange):
        hazard_rate(-0.01, 5)
    with pytest.raises(ValueError):
        hazard_rate(0.1, 0)


@given(st.floats(0.0, 0.99), st.floats(0.5, 30))
def test_hazard_inverse(pd, t):
    lam = hazard_rate(pd, t)
    assert -math.expm1(-lam * t) == pytest.approx(pd, abs=1e-12)


def test_spread_examples():
    assert cds_spread(0.0, 0.7) == 0.0015
    assert cds_spread(0.01, 0.5, 0.0015) == pytest.approx(0.0065, abs=1e-15)
    with pytest.raises(ValueError):
        cds_spread(-0.01, 0.5)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 0.5))
def test_spread_monotone(lam, lgd, bump):
    assert cds_spread(lam + bump, lgd) >= cds_spread(lam, lgd)
    assert cds_spread(lam, min(1.0, lgd + bump)) >= cds_spread(lam, lgd)


def test_expected_loss_examples():
    e = expected_loss(np.zeros(10))
    assert (e.mean, e.std_error, e.n_runs) == (0.0, 0.0, 10)
    e = expected_loss(np.full(7, 0.5))
    assert (e.mean, e.std_error) == (0.5, 0.0)
    e = expected_loss(np.repeat([0.0, 1.0], 5000))
    assert e.mean == 0.5
    # sample sd uses n-1: sqrt(n/(n-1)) * 0.5 / 100
    assert e.std_error == pytest.approx(0.005 * math.sqrt(10000 / 9999), rel=1e-12)
    assert e.std_error == pytest.approx(0.005, abs=1e-6)
    with pytest.raises(EmptyInput):
        expected_loss([])


def test_zero_pd_pipeline_quotes_premium(countries):
    c = replace(countries[0], pd_normal=0.0, pd_recession=0.0)
    q = cds_pipeline(c, solo(c, n_runs=500))
    assert q.spread == RESIDUAL_PREMIUM
    assert q.cum_pd == 0.0 and q.n_defaults == 0 and math.isnan(q.mean_lgd)


def test_cds_scenario_forces_ten_years_face_only(scenario):
    s = cds_scenario(scenario.with_bond(maturity_years=3, loss_convention="coupon"))
    assert s.bond.maturity_years == 10
    assert s.bond.loss_convention.value == "face"


def test_china_pipeline_against_closed_form(countries):
    chn = countries[1]
    n = 100_000
    q = cds_pipeline(chn, solo(chn, n_runs=n, master_seed=5))
    oracle = closed_form_country(chn, Q, 10)
    assert oracle["spread"] == pytest.approx(0.0064, abs=1e-4)
    assert abs(q.cum_pd - oracle["cum_pd"]) <= 3 * math.sqrt(oracle["cum_pd"] * (1 - oracle["cum_pd"]) / n)
    # realized LGD is 0.325 or 0.65; share of recession-year defaults is (lgd - 0.325) / 0.325
    share = (oracle["lgd"] - 0.325) / 0.325
    lgd_se = 0.325 * math.sqrt(share * (1 - share) / q.n_defaults)
    assert abs(q.mean_lgd - oracle["lgd"]) <= 3 * lgd_se + 1e-12
    assert q.spread == pytest.approx(0.006, abs=0.0015)


def test_quote_invariants():
    quotes = cds_quotes(default_scenario(n_runs=5000, master_seed=9))
    for q in quotes:
        assert 0 <= q.cum_pd < 1 and q.hazard >= 0 and q.spread >= q.premium_r
        assert q.spread == pytest.approx(q.hazard * q.mean_lgd + q.premium_r, abs=1e-15)


def test_closed_form_ranking_of_safest_half(countries):
    spreads = [closed_form_country(c, Q, 10)["spread"] for c in countries[:9]]
    assert all(a <= b + 1e-15 for a, b in zip(spreads, spreads[1:]))
    quotes = cds_quotes(default_scenario(n_runs=20000, master_seed=2))
    by_risk = min(quotes, key=lambda q: q.cum_pd * q.mean_lgd)
    assert min(quotes, key=lambda q: q.spread).code == by_risk.code


def test_country_el_matches_closed_form(countries):
    s = default_scenario(n_runs=30000, master_seed=6)
    face = country_expected_losses(cohort_batch(s))
    coupon = country_expected_losses(cohort_batch(s), "coupon")
    for c in countries:
        f = closed_form_country(c, Q, 5)
        g = closed_form_country(c, Q, 5, coupon=0.10)
        assert abs(face[c.code].mean - f["el"]) <= 4 * face[c.code].std_error
        assert abs(coupon[c.code].mean - g["el"]) <= 4 * coupon[c.code].std_error


def test_bolivia_closed_form_hazard_oracle():
    # h = 0.88 * 0.075 + 0.12 * 0.125, five years, coupons lost from the default year on
    h = 0.88 * 0.075 + 0.12 * 0.125
    el = sum((1 - h) ** (k - 1) * h * (1 + 0.1 * (6 - k)) for k in range(1, 6))
    assert el == pytest.approx(0.4536, abs=1e-4)
