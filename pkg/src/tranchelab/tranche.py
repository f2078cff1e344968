"""Portfolio weights, the senior/junior waterfall and subordination sweeps."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Mapping, Sequence, Union

import numpy as np

from .defaults import CohortBatch, PathOutcome, cohort_batch
from .engine import mean_and_se
from .errors import InvalidSubordination, MissingFlags, UnknownScheme, WeightMismatch
from .pricing import ElEstimate, expected_loss
from .scenario import CountryParams, LossConvention, Scenario

KAPPAS = tuple(round(0.05 * k, 2) for k in range(11))
CENT = Decimal("0.01")


class WeightScheme(enum.Enum):
    GDP_BASED = "gdp"
    TWO_TO_ONE = "two-to-one"
    CHINA_DEBTORS = "china-debtors"
    EQUAL = "equal"

    @classmethod
    def parse(cls, name: "str | WeightScheme") -> "WeightScheme":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for s in cls:
            if key in (s.value, s.name.lower().replace("_", "-")):
                return s
        raise UnknownScheme(f"unknown weighting scheme {name!r}")


SchemeLike = Union[WeightScheme, str, Mapping[str, float]]


def _normalize(raw: Mapping[str, float]) -> dict[str, float]:
    total = math.fsum(raw.values())
    if total <= 0:
        raise WeightMismatch("weights must have a positive total")
    return {k: v / total for k, v in raw.items()}


def build_weights(scheme: SchemeLike, countries: Sequence[CountryParams]) -> dict[str, float]:
    """Portfolio weights keyed by country code, summing to one.

    A mapping is taken as custom weights and must already be a simplex.
    """
    codes = [c.code for c in countries]
    if isinstance(scheme, Mapping):
        w = {code: float(scheme.get(code, 0.0)) for code in codes}
        extra = set(scheme) - set(codes)
        if extra:
            raise WeightMismatch(f"weights for unknown countries: {sorted(extra)}")
        if min(w.values()) < 0 or abs(math.fsum(w.values()) - 1.0) > 1e-9:
            raise WeightMismatch("custom weights must be non-negative and sum to 1")
        return w

    scheme = WeightScheme.parse(scheme)
    n = len(countries)
    if scheme is WeightScheme.EQUAL:
        return {code: 1.0 / n for code in codes}
    if scheme is WeightScheme.GDP_BASED:
        return _normalize({c.code: c.gdp_weight for c in countries})
    if scheme is WeightScheme.TWO_TO_ONE:
        ranks = sorted(c.rank for c in countries)
        if ranks != list(range(1, n + 1)):
            raise MissingFlags("two-to-one weights need ranks 1..N")
        # safer half carries two units (7.4% vs 3.7% for 18 countries)
        return _normalize({c.code: 2.0 if c.rank <= n // 2 else 1.0 for c in countries})
    china = [c for c in countries if c.is_china]
    debtors = [c for c in countries if c.is_china_debtor]
    if len(china) != 1 or not debtors:
        raise MissingFlags("china-debtors weights need one is_china country and at least one debtor")
    w = {code: 0.0 for code in codes}
    w[china[0].code] = 2.0 / 3.0
    for c in debtors:
        w[c.code] = (1.0 / 3.0) / len(debtors)
    return w


def scheme_label(scheme: SchemeLike) -> str:
    if isinstance(scheme, Mapping):
        return "custom"
    return WeightScheme.parse(scheme).value


def weight_vector(weights: Mapping[str, float], codes: Sequence[str]) -> np.ndarray:
    if set(weights) != set(codes):
        raise WeightMismatch("weights must cover exactly the simulated countries")
    return np.array([weights[c] for c in codes], dtype=np.float64)


def pool_loss(weights: Mapping[str, float], outcome: PathOutcome) -> float:
    w = weight_vector(weights, outcome.codes)
    return math.fsum((w * outcome.loss_fraction).tolist())


def _check_kappa(kappa: float) -> None:
    if not 0.0 <= kappa < 1.0:
        raise InvalidSubordination(f"subordination must lie in [0, 1), got {kappa!r}")


def tranche_losses(pool: float, kappa: float) -> tuple[float | None, float]:
    """(junior, senior) loss fractions; junior is None when there is no junior tranche."""
    _check_kappa(kappa)
    if pool < 0:
        raise ValueError("pool loss must be non-negative")
    junior, senior = waterfall(np.array([pool]), kappa)
    return (None if junior is None else float(junior[0])), float(senior[0])


def waterfall(pool: np.ndarray, kappa: float) -> tuple[np.ndarray | None, np.ndarray]:
    _check_kappa(kappa)
    if kappa == 0.0:
        return None, pool.astype(np.float64, copy=True)
    junior = np.minimum(pool, kappa) / kappa
    senior = np.maximum(pool - kappa, 0.0) / (1.0 - kappa)
    return junior, senior


@dataclass(frozen=True)
class TrancheRow:
    kappa: float
    el_pool: float
    el_senior: float
    el_junior: float | None
    se_pool: float
    se_senior: float
    se_junior: float | None


@dataclass(frozen=True)
class TrancheCurve:
    scheme: str
    weights: dict[str, float]
    convention: LossConvention
    n_runs: int
    rows: tuple[TrancheRow, ...]

    def row(self, kappa: float) -> TrancheRow:
        for r in self.rows:
            if abs(r.kappa - kappa) < 1e-12:
                return r
        raise KeyError(kappa)


def sweep_batch(batch: CohortBatch, scheme: SchemeLike, kappas: Sequence[float] = KAPPAS,
                convention: LossConvention | str | None = None) -> TrancheCurve:
    """Tranche expected losses for every kappa, all computed on the same paths."""
    conv = batch.scenario.bond.loss_convention if convention is None else LossConvention.parse(convention)
    weights = build_weights(scheme, batch.scenario.countries)
    w = weight_vector(weights, batch.codes)
    pool = batch.losses(conv) @ w
    pool_mean, pool_se = mean_and_se(pool)
    rows = []
    for kappa in kappas:
        junior, senior = waterfall(pool, kappa)
        s_mean, s_se = mean_and_se(senior)
        if junior is None:
            j_mean = j_se = None
        else:
            j_mean, j_se = mean_and_se(junior)
        rows.append(TrancheRow(float(kappa), pool_mean, s_mean, j_mean, pool_se, s_se, j_se))
    return TrancheCurve(scheme_label(scheme), weights, conv, len(batch), tuple(rows))


def subordination_sweep(scenario: Scenario, scheme: SchemeLike, kappas: Sequence[float] = KAPPAS,
                        workers: int = 1, convention: LossConvention | str | None = None) -> TrancheCurve:
    return sweep_batch(cohort_batch(scenario, workers), scheme, kappas, convention)


def national_tranching(country: CountryParams, kappa: float, scenario: Scenario,
                       batch: CohortBatch | None = None, workers: int = 1,
                       convention: LossConvention | str | None = None) -> ElEstimate:
    """Senior expected loss when a single sovereign's bonds are tranched on their own."""
    if not 0.0 < kappa < 1.0:
        raise InvalidSubordination(f"national tranching needs 0 < kappa < 1, got {kappa!r}")
    if batch is None or country.code not in batch.codes:
        batch = cohort_batch(scenario, workers)
    i = batch.codes.index(country.code)
    _, senior = waterfall(batch.losses(convention)[:, i], kappa)
    return expected_loss(senior)


@dataclass(frozen=True)
class DealSheet:
    debtor_purchase: Decimal
    china_purchase: Decimal
    senior_issued: Decimal
    junior_issued: Decimal
    subordination: Decimal

    @property
    def total_assets(self) -> Decimal:
        return self.debtor_purchase + self.china_purchase

    @property
    def total_liabilities(self) -> Decimal:
        return self.senior_issued + self.junior_issued


def _dec(x) -> Decimal:
    return x if isinstance(x, Decimal) else Decimal(str(x))


def structure_deal(debt_amount, kappa, anchor_multiple=2) -> DealSheet:
    """Vehicle balance sheet: buy the debtors' bonds plus ``multiple`` times as much anchor debt.

    Amounts are rounded to cents; the senior tranche takes the rounding so the
    balance identity holds exactly.
    """
    debt, k, m = _dec(debt_amount), _dec(kappa), _dec(anchor_multiple)
    if not Decimal(0) <= k < Decimal(1):
        raise InvalidSubordination(f"subordination must lie in [0, 1), got {kappa!r}")
    if debt < 0 or m < 0:
        raise ValueError("debt amount and multiple must be non-negative")
    debtor = debt.quantize(CENT)
    china = (m * debt).quantize(CENT)
    total = debtor + china
    junior = (k * total).quantize(CENT)
    return DealSheet(debtor, china, total - junior, junior, k)
