"""Hazard rates, approximate CDS spreads and expected-loss estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .defaults import CohortBatch, cohort_batch
from .engine import mean_and_se
from .errors import EmptyInput, PdOutOfRange
from .scenario import CountryParams, LossConvention, Scenario

RESIDUAL_PREMIUM = 0.0015
CDS_MATURITY = 10


@dataclass(frozen=True)
class CdsQuote:
    code: str
    cum_pd: float
    mean_lgd: float  # nan when no run defaulted
    hazard: float
    spread: float
    premium_r: float = RESIDUAL_PREMIUM
    n_defaults: int = 0

    @property
    def spread_pct(self) -> float:
        return 100.0 * self.spread


@dataclass(frozen=True)
class ElEstimate:
    mean: float
    std_error: float
    n_runs: int


def hazard_rate(cum_pd: float, horizon_years: float) -> float:
    """Constant annual hazard implied by a cumulative PD: -ln(1 - PD) / T."""
    if horizon_years <= 0:
        raise ValueError("horizon must be positive")
    if not 0.0 <= cum_pd < 1.0:
        raise PdOutOfRange(f"cumulative PD must lie in [0, 1), got {cum_pd!r}")
    if cum_pd == 0.0:
        return 0.0
    return -math.log1p(-cum_pd) / horizon_years


def cds_spread(hazard: float, mean_lgd: float, premium_r: float = RESIDUAL_PREMIUM) -> float:
    if min(hazard, mean_lgd, premium_r) < 0:
        raise ValueError("spread inputs must be non-negative")
    return hazard * mean_lgd + premium_r


def expected_loss(losses) -> ElEstimate:
    losses = np.asarray(losses, dtype=np.float64).ravel()
    if losses.size == 0:
        raise EmptyInput("expected loss needs at least one run")
    mean, se = mean_and_se(losses)
    return ElEstimate(mean, se, int(losses.size))


def quotes_from_batch(batch: CohortBatch, premium_r: float = RESIDUAL_PREMIUM) -> list[CdsQuote]:
    """Per-country quotes using realized face-only LGD over defaulting runs."""
    horizon = batch.scenario.bond.maturity_years
    n = len(batch)
    out = []
    for i, code in enumerate(batch.codes):
        hit = batch.default_year[:, i] > 0
        n_def = int(hit.sum())
        cum_pd = n_def / n
        if n_def == 0:
            out.append(CdsQuote(code, 0.0, math.nan, 0.0, premium_r, premium_r, 0))
            continue
        mean_lgd = math.fsum(batch.lgd_applied[hit, i].tolist()) / n_def
        lam = hazard_rate(cum_pd, horizon)
        out.append(CdsQuote(code, cum_pd, mean_lgd, lam, cds_spread(lam, mean_lgd, premium_r),
                            premium_r, n_def))
    return out


def cds_scenario(scenario: Scenario) -> Scenario:
    return scenario.with_bond(maturity_years=CDS_MATURITY,
                              loss_convention=LossConvention.FACE_ONLY)


def cds_quotes(scenario: Scenario, workers: int = 1,
               premium_r: float = RESIDUAL_PREMIUM) -> list[CdsQuote]:
    """Quotes for every country from one joint batch of 10-year cohorts."""
    return quotes_from_batch(cohort_batch(cds_scenario(scenario), workers), premium_r)


def cds_pipeline(country: CountryParams, scenario: Scenario, workers: int = 1,
                 premium_r: float = RESIDUAL_PREMIUM) -> CdsQuote:
    """Quote one country simulated on its own."""
    solo = replace(scenario, countries=(country,))
    return cds_quotes(solo, workers, premium_r)[0]


def country_expected_losses(batch: CohortBatch,
                            convention: LossConvention | str | None = None) -> dict[str, ElEstimate]:
    losses = batch.losses(convention)
    return {code: expected_loss(losses[:, i]) for i, code in enumerate(batch.codes)}
