import io
from dataclasses import replace

import pytest

from tranchelab.errors import MalformedCsv, ScenarioError
from tranchelab.scenario import (
    BondSpec, FactorParams, LossConvention, Scenario, canonical_dataset, read_countries_csv,
    scenario_violations, validate_scenario, write_countries_csv,
)

DEBTORS = {"IDN", "KAZ", "BRA", "ZAF", "UZB", "EGY", "UGA", "NGA", "BOL", "ETH"}
TABLE3_ORDER = ["ARE", "CHN", "THA", "MYS", "IND", "SAU", "IDN", "KAZ", "RUS",
                "BRA", "ZAF", "UZB", "EGY", "IRN", "NGA", "UGA", "ETH", "BOL"]


def test_canonical_dataset_is_valid(countries):
    assert len(countries) == 18
    validate_scenario(Scenario(tuple(countries)))


def test_china_row(countries):
    chn = next(c for c in countries if c.code == "CHN")
    assert (chn.pd_normal, chn.pd_recession, chn.lgd_normal, chn.lgd_recession) == \
        (0.0075, 0.035, 0.325, 0.65)
    assert chn.gdp_weight == pytest.approx(0.572, abs=0.002)
    assert chn.gdp_weight == pytest.approx(57.2 / 99.8, abs=1e-15)
    assert chn.is_china and not chn.is_china_debtor


def test_bolivia_row(countries):
    bol = countries[-1]
    assert bol.code == "BOL"
    assert (bol.pd_normal, bol.pd_recession, bol.lgd_normal, bol.lgd_recession) == (0.075, 0.125, 1.0, 1.0)


def test_weights_sum_to_one(countries):
    assert sum(c.gdp_weight for c in countries) == pytest.approx(1.0, abs=1e-9)


def test_flags_and_ranks(countries):
    assert [c.code for c in countries] == TABLE3_ORDER
    assert [c.rank for c in countries] == list(range(1, 19))
    assert sum(c.is_china for c in countries) == 1
    assert {c.code for c in countries if c.is_china_debtor} == DEBTORS


def test_recession_parameters_dominate(countries):
    for c in countries:
        assert c.pd_recession >= c.pd_normal
        assert c.lgd_recession >= c.lgd_normal


def test_out_of_range_pd_is_reported(countries):
    bad = replace(countries[0], pd_normal=1.2)
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(Scenario((bad,) + tuple(countries[1:])))
    fields = [v.field for v in exc.value.violations]
    assert "countries[ARE].pd_normal" in fields


def test_duplicate_code(countries):
    dup = replace(countries[0], code="CHN")
    problems = scenario_violations(Scenario((dup,) + tuple(countries[1:])))
    assert any(v.kind == "DuplicateCountryCode" for v in problems)


def test_all_violations_collected(countries):
    bad = replace(countries[0], pd_normal=0.5, pd_recession=0.1, lgd_normal=-1.0)
    s = Scenario((bad,), FactorParams(sigma_f=-1), BondSpec(maturity_years=0), n_runs=0)
    problems = scenario_violations(s)
    assert {"countries[ARE].pd_recession", "countries[ARE].lgd_normal", "factor.sigma_f",
            "bond.maturity_years", "n_runs"} <= {v.field for v in problems}


def test_csv_round_trip(countries):
    text = write_countries_csv(countries)
    assert text.splitlines()[0] == ("code,pd_normal,pd_recession,lgd_normal,lgd_recession,"
                                    "gdp_weight,rank,is_china,is_china_debtor")
    assert read_countries_csv(io.StringIO(text)) == countries


def test_csv_rejects_bad_header():
    with pytest.raises(MalformedCsv):
        read_countries_csv(io.StringIO("code,pd\nCHN,0.1\n"))


def test_digest_tracks_parameters(countries):
    a = Scenario(tuple(countries))
    assert a.digest() == Scenario(tuple(countries), master_seed=9).digest()
    assert a.digest() != a.with_bond(loss_convention=LossConvention.COUPON_INCLUSIVE).digest()
