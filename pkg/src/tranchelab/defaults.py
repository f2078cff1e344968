"""Default timing and loss fractions for cohorts of sovereign bonds.

One cohort run draws a recession panel over the bond's life (shared by all
countries), then for each country walks years 1..maturity using the regime's
PD; the first default ends the bond. Default uniforms are consumed country by
country, year by year, always ``maturity`` per country (draws after a default
are discarded) so the stream layout does not depend on outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .engine import ResultSet, run_parallel
from .errors import InvalidYear
from .scenario import BondSpec, LossConvention, Scenario


@dataclass(frozen=True)
class PathOutcome:
    codes: tuple[str, ...]
    default_year: np.ndarray  # 0 = survived to maturity
    lgd_applied: np.ndarray
    loss_fraction: np.ndarray


def loss_fraction(default_year: int, lgd: float, bond: BondSpec) -> float:
    if not 0 <= default_year <= bond.maturity_years:
        raise InvalidYear(f"default year {default_year} outside 0..{bond.maturity_years}")
    return float(loss_fractions(np.array([default_year]), np.array([lgd]), bond)[0])


def loss_fractions(default_year: np.ndarray, lgd: np.ndarray, bond: BondSpec,
                   convention: LossConvention | str | None = None) -> np.ndarray:
    """Vectorized loss per unit of face.

    FaceOnly loses ``lgd``. CouponInclusive also loses the coupons from the
    default year onward: ``lgd * (1 + coupon * (maturity - k + 1))``.
    """
    conv = bond.loss_convention if convention is None else LossConvention.parse(convention)
    k = np.asarray(default_year)
    lgd = np.asarray(lgd, dtype=np.float64)
    hit = k > 0
    if conv is LossConvention.FACE_ONLY:
        return np.where(hit, lgd, 0.0)
    scale = 1.0 + bond.coupon_rate * (bond.maturity_years - k + 1)
    return np.where(hit, lgd * scale, 0.0)


def _param_arrays(scenario: Scenario):
    cs = scenario.countries
    return tuple(np.array([getattr(c, f) for c in cs], dtype=np.float64)
                 for f in ("pd_normal", "pd_recession", "lgd_normal", "lgd_recession"))


def simulate_runs(scenario: Scenario, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    f = scenario.factor
    return kernels.active.simulate_cohorts(
        np.uint64(scenario.master_seed), lo, hi, scenario.bond.maturity_years,
        float(f.mu_f), float(f.sigma_f), float(f.sigma_eps), f.perfect_sync,
        *_param_arrays(scenario),
    )


@dataclass(frozen=True)
class CohortBatch:
    """Outcomes of ``n_runs`` cohorts, arrays of shape (runs, countries)."""

    scenario: Scenario
    default_year: np.ndarray
    lgd_applied: np.ndarray
    result: ResultSet

    def __len__(self) -> int:
        return self.default_year.shape[0]

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(self.scenario.codes)

    def losses(self, convention: LossConvention | str | None = None) -> np.ndarray:
        return loss_fractions(self.default_year, self.lgd_applied, self.scenario.bond, convention)

    def outcome(self, run: int) -> PathOutcome:
        dy = self.default_year[run]
        lgd = self.lgd_applied[run]
        return PathOutcome(self.codes, dy.copy(), lgd.copy(),
                           loss_fractions(dy, lgd, self.scenario.bond))

    def __getitem__(self, run: int) -> PathOutcome:
        return self.outcome(run)


def simulate_cohort(scenario: Scenario, run_index: int = 0) -> PathOutcome:
    dy, lgd = simulate_runs(scenario, run_index, run_index + 1)
    return PathOutcome(tuple(scenario.codes), dy[0], lgd[0],
                       loss_fractions(dy[0], lgd[0], scenario.bond))


def cohort_batch(scenario: Scenario, workers: int = 1) -> CohortBatch:
    def work(lo, hi):
        dy, lgd = simulate_runs(scenario, lo, hi)
        return {"default_year": dy, "lgd_applied": lgd}

    rs = run_parallel(scenario.n_runs, work, workers=workers,
                      provenance={"seed": str(scenario.master_seed),
                                  "scenario": scenario.digest(),
                                  "backend": kernels.backend_name})
    return CohortBatch(scenario, rs.records["default_year"], rs.records["lgd_applied"], rs)


def write_loss_dump(batch: CohortBatch, convention: LossConvention | str | None = None) -> str:
    """CSV ``run,code,default_year,lgd,loss_fraction`` for runs with at least one default."""
    losses = batch.losses(convention)
    lines = ["run,code,default_year,lgd,loss_fraction"]
    runs, cols = np.nonzero(batch.default_year)
    for r, i in zip(runs.tolist(), cols.tolist()):
        lines.append(f"{r},{batch.codes[i]},{int(batch.default_year[r, i])},"
                     f"{float(batch.lgd_applied[r, i])!r},{float(losses[r, i])!r}")
    return "\n".join(lines) + "\n"
