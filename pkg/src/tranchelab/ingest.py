"""Empirical GDP-growth panels and the recession indicators derived from them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .cycles import CyclePanel
from .errors import DuplicateCell, MalformedCsv, UnknownCountryCode

HEADER = ("code", "year", "growth_pct")
MISSING_TOKENS = {"", "na", "nan", "..", "null"}


@dataclass(frozen=True)
class GrowthPanel:
    codes: tuple[str, ...]
    years: tuple[int, ...]
    growth_pct: np.ndarray  # (years, countries), nan where missing

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.growth_pct)

    def recessions(self) -> CyclePanel:
        """Recession = negative annual growth; missing cells stay unobserved."""
        observed = ~self.missing
        states = np.where(observed, self.growth_pct < 0.0, False)
        return CyclePanel(states, self.codes, None if observed.all() else observed, self.years)


def ingest_gdp_growth(source: "str | Path | io.TextIOBase",
                      known_codes: Sequence[str] | None = None) -> tuple[GrowthPanel, CyclePanel]:
    """Parse a long-format ``code,year,growth_pct`` CSV.

    Columns follow ``known_codes`` order when given (codes absent from the file
    are dropped); otherwise first-appearance order. Years run from the first
    to the last year present, with gaps treated as missing.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return ingest_gdp_growth(fh, known_codes)
    reader = csv.reader(source)
    rows = [(n, r) for n, r in enumerate(reader, start=1) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise MalformedCsv("empty growth file")
    header_line, header = rows[0]
    if tuple(h.strip().lower() for h in header) != HEADER:
        raise MalformedCsv(f"line {header_line}: header must be {','.join(HEADER)}")

    known = set(known_codes) if known_codes is not None else None
    cells: dict[tuple[str, int], float] = {}
    seen_order: list[str] = []
    for lineno, row in rows[1:]:
        if len(row) != 3:
            raise MalformedCsv(f"line {lineno}: expected 3 columns, got {len(row)}")
        code, year_text, value_text = (x.strip() for x in row)
        if known is not None and code not in known:
            raise UnknownCountryCode(f"line {lineno}: unknown country code {code!r}")
        try:
            year = int(year_text)
        except ValueError:
            raise MalformedCsv(f"line {lineno}, column year: not an integer: {year_text!r}") from None
        if value_text.lower() in MISSING_TOKENS:
            value = math.nan
        else:
            try:
                value = float(value_text)
            except ValueError:
                raise MalformedCsv(f"line {lineno}, column growth_pct: not a number: {value_text!r}") from None
        if (code, year) in cells:
            raise DuplicateCell(f"line {lineno}: duplicate cell ({code}, {year})")
        cells[(code, year)] = value
        if code not in seen_order:
            seen_order.append(code)

    if not cells:
        raise MalformedCsv("growth file has no data rows")
    present = set(seen_order)
    codes = tuple(c for c in known_codes if c in present) if known_codes is not None else tuple(seen_order)
    all_years = [y for _, y in cells]
    years = tuple(range(min(all_years), max(all_years) + 1))
    grid = np.full((len(years), len(codes)), np.nan)
    col = {c: i for i, c in enumerate(codes)}
    for (code, year), value in cells.items():
        grid[year - years[0], col[code]] = value
    panel = GrowthPanel(codes, years, grid)
    return panel, panel.recessions()
