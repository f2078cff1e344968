"""Domain types, validation and the canonical 18-country dataset.

All parameters are stored as fractions. The embedded ``countries.csv`` holds
the calibrated default/loss parameters with the normal-regime PDs converted
from percent (0.75 -> 0.0075) and the recession PDs already expressed as
fractions; GDP weights are renormalized to sum to one.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import InvalidParameter, MalformedCsv, ScenarioError, Violation

CSV_HEADER = (
    "code",
    "pd_normal",
    "pd_recession",
    "lgd_normal",
    "lgd_recession",
    "gdp_weight",
    "rank",
    "is_china",
    "is_china_debtor",
)

COUNTRY_NAMES = {
    "ARE": "UAE",
    "CHN": "China",
    "THA": "Thailand",
    "MYS": "Malaysia",
    "IND": "India",
    "SAU": "Saudi Arabia",
    "IDN": "Indonesia",
    "KAZ": "Kazakhstan",
    "RUS": "Russia",
    "BRA": "Brazil",
    "ZAF": "South Africa",
    "UZB": "Uzbekistan",
    "EGY": "Egypt",
    "IRN": "Iran",
    "NGA": "Nigeria",
    "UGA": "Uganda",
    "ETH": "Ethiopia",
    "BOL": "Bolivia",
}

MAX_SEED = 2**64 - 1


class SyncMode(enum.Enum):
    FACTOR_DRIVEN = "factor"
    PERFECT_SYNC = "perfect"


class LossConvention(enum.Enum):
    FACE_ONLY = "face"
    COUPON_INCLUSIVE = "coupon"

    @classmethod
    def parse(cls, value: "str | LossConvention") -> "LossConvention":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        aliases = {"face": cls.FACE_ONLY, "face-only": cls.FACE_ONLY,
                   "coupon": cls.COUPON_INCLUSIVE,
                   "coupon-inclusive": cls.COUPON_INCLUSIVE}
        try:
            return aliases[key]
        except KeyError:
            raise InvalidParameter("loss_convention", f"unknown convention {value!r}") from None


@dataclass(frozen=True)
class CountryParams:
    code: str
    pd_normal: float
    pd_recession: float
    lgd_normal: float
    lgd_recession: float
    gdp_weight: float
    rank: int
    is_china: bool = False
    is_china_debtor: bool = False

    @property
    def name(self) -> str:
        return COUNTRY_NAMES.get(self.code, self.code)


@dataclass(frozen=True)
class FactorParams:
    mu_f: float = 3.0
    sigma_f: float = 1.9
    sigma_eps: float = 0.15
    sync_mode: SyncMode = SyncMode.FACTOR_DRIVEN

    @property
    def perfect_sync(self) -> bool:
        return self.sync_mode is SyncMode.PERFECT_SYNC


@dataclass(frozen=True)
class BondSpec:
    maturity_years: int = 5
    coupon_rate: float = 0.10
    loss_convention: LossConvention = LossConvention.FACE_ONLY


@dataclass(frozen=True)
class Scenario:
    countries: tuple[CountryParams, ...]
    factor: FactorParams = field(default_factory=FactorParams)
    bond: BondSpec = field(default_factory=BondSpec)
    n_runs: int = 100_000
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "countries", tuple(self.countries))

    @property
    def codes(self) -> list[str]:
        return [c.code for c in self.countries]

    def country(self, code: str) -> CountryParams:
        for c in self.countries:
            if c.code == code:
                return c
        raise InvalidParameter("code", f"unknown country {code!r}")

    def with_bond(self, **changes) -> "Scenario":
        return replace(self, bond=replace(self.bond, **changes))

    def with_factor(self, **changes) -> "Scenario":
        return replace(self, factor=replace(self.factor, **changes))

    def digest(self) -> str:
        """Short content hash of everything that shapes the simulated paths except seed and run count."""
        payload = {
            "countries": [asdict(c) for c in self.countries],
            "factor": {**asdict(self.factor), "sync_mode": self.factor.sync_mode.value},
            "bond": {**asdict(self.bond), "loss_convention": self.bond.loss_convention.value},
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _fraction_ok(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x) and 0.0 <= x <= 1.0


def scenario_violations(scenario: Scenario) -> list[Violation]:
    """Every broken invariant of ``scenario``; empty when it is valid."""
    out: list[Violation] = []
    seen: set[str] = set()
    n = len(scenario.countries)
    if n == 0:
        out.append(Violation("countries", "at least one country required"))
    for c in scenario.countries:
        where = f"countries[{c.code}]"
        if c.code in seen:
            out.append(Violation(f"{where}.code", f"duplicate code {c.code!r}", "DuplicateCountryCode"))
        seen.add(c.code)
        if not c.code:
            out.append(Violation(f"{where}.code", "empty code"))
        for name in ("pd_normal", "pd_recession", "lgd_normal", "lgd_recession", "gdp_weight"):
            if not _fraction_ok(getattr(c, name)):
                out.append(Violation(f"{where}.{name}", f"must be a fraction in [0, 1], got {getattr(c, name)!r}"))
        if _fraction_ok(c.pd_normal) and _fraction_ok(c.pd_recession) and c.pd_recession < c.pd_normal:
            out.append(Violation(f"{where}.pd_recession", "must be >= pd_normal"))
        if _fraction_ok(c.lgd_normal) and _fraction_ok(c.lgd_recession) and c.lgd_recession < c.lgd_normal:
            out.append(Violation(f"{where}.lgd_recession", "must be >= lgd_normal"))
        if not isinstance(c.rank, int) or not 1 <= c.rank <= n:
            out.append(Violation(f"{where}.rank", f"must be an integer in 1..{n}"))

    f = scenario.factor
    for name in ("sigma_f", "sigma_eps"):
        v = getattr(f, name)
        if not (math.isfinite(v) and v >= 0):
            out.append(Violation(f"factor.{name}", "must be finite and >= 0"))
    if not math.isfinite(f.mu_f):
        out.append(Violation("factor.mu_f", "must be finite"))

    b = scenario.bond
    if not isinstance(b.maturity_years, int) or b.maturity_years < 1:
        out.append(Violation("bond.maturity_years", "must be an integer >= 1"))
    if not (math.isfinite(b.coupon_rate) and b.coupon_rate >= 0):
        out.append(Violation("bond.coupon_rate", "must be >= 0"))

    if not isinstance(scenario.n_runs, int) or scenario.n_runs < 1:
        out.append(Violation("n_runs", "must be an integer >= 1"))
    if not isinstance(scenario.master_seed, int) or not 0 <= scenario.master_seed <= MAX_SEED:
        out.append(Violation("master_seed", "must be an unsigned 64-bit integer"))
    return out


def validate_scenario(scenario: Scenario) -> Scenario:
    """Return ``scenario`` unchanged, or raise ScenarioError listing all violations."""
    problems = scenario_violations(scenario)
    if problems:
        raise ScenarioError(problems)
    return scenario


def _parse_bool(text: str, where: str) -> bool:
    if text.strip() in ("0", "1"):
        return text.strip() == "1"
    raise MalformedCsv(f"{where}: expected 0 or 1, got {text!r}")


def read_countries_csv(source: "str | Path | io.TextIOBase") -> list[CountryParams]:
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_countries_csv(fh)
    rows = [r for r in csv.reader(source) if r and not r[0].startswith("#")]
    if not rows or tuple(h.strip() for h in rows[0]) != CSV_HEADER:
        raise MalformedCsv(f"line 1: header must be {','.join(CSV_HEADER)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(CSV_HEADER):
            raise MalformedCsv(f"line {lineno}: expected {len(CSV_HEADER)} columns, got {len(row)}")
        try:
            out.append(CountryParams(
                code=row[0].strip(),
                pd_normal=float(row[1]),
                pd_recession=float(row[2]),
                lgd_normal=float(row[3]),
                lgd_recession=float(row[4]),
                gdp_weight=float(row[5]),
                rank=int(row[6]),
                is_china=_parse_bool(row[7], f"line {lineno} is_china"),
                is_china_debtor=_parse_bool(row[8], f"line {lineno} is_china_debtor"),
            ))
        except ValueError as exc:
            raise MalformedCsv(f"line {lineno}: {exc}") from None
    return out


def write_countries_csv(countries: Iterable[CountryParams]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in countries:
        w.writerow([c.code, repr(c.pd_normal), repr(c.pd_recession), repr(c.lgd_normal),
                    repr(c.lgd_recession), repr(c.gdp_weight), c.rank, int(c.is_china),
                    int(c.is_china_debtor)])
    return buf.getvalue()


def canonical_dataset() -> list[CountryParams]:
    """The 18 countries ranked safest first, as shipped in ``data/countries.csv``."""
    text = resources.files("tranchelab").joinpath("data/countries.csv").read_text()
    return read_countries_csv(io.StringIO(text))


def default_scenario(n_runs: int = 100_000, master_seed: int = 0, **bond) -> Scenario:
    return Scenario(countries=tuple(canonical_dataset()), bond=BondSpec(**bond),
                    n_runs=n_runs, master_seed=master_seed)
