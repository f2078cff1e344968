"""Recession panels from the common-factor logistic model.

Per year ``t`` a global factor ``F_t ~ Normal(mu_f, sigma_f)`` and country
shocks ``eps_it ~ Normal(0, sigma_eps)`` give the recession probability
``p_it = 1 / (1 + exp(F_t + eps_it))``; the state is then a Bernoulli(p_it)
draw. Draw order within a substream, per year: one uniform for ``F_t``, one
per country for ``eps``, one per country for the indicator. In perfect-sync
mode only two uniforms are consumed per year (``F_t`` and the shared
indicator).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .engine import run_parallel
from .errors import MalformedCsv, NonFiniteInput
from .scenario import FactorParams


@dataclass(frozen=True)
class CyclePanel:
    """Boolean recession states, shape (years, countries).

    ``observed`` marks cells carrying data; simulated panels are fully observed.
    """

    states: np.ndarray
    codes: tuple[str, ...] = ()
    observed: np.ndarray | None = None
    year_labels: tuple[int, ...] = ()

    def __post_init__(self):
        states = np.asarray(self.states, dtype=bool)
        if states.ndim != 2 or states.shape[0] < 1 or states.shape[1] < 1:
            raise ValueError(f"panel states must be a non-empty 2-D matrix, got shape {states.shape}")
        object.__setattr__(self, "states", states)
        if self.observed is not None:
            obs = np.asarray(self.observed, dtype=bool)
            if obs.shape != states.shape:
                raise ValueError("observed mask shape must match states")
            object.__setattr__(self, "observed", obs)
        if not self.codes:
            object.__setattr__(self, "codes", tuple(f"C{i + 1:02d}" for i in range(states.shape[1])))
        elif len(self.codes) != states.shape[1]:
            raise ValueError("one code per panel column required")

    @property
    def years(self) -> int:
        return self.states.shape[0]

    @property
    def countries(self) -> int:
        return self.states.shape[1]

    @property
    def mask(self) -> np.ndarray:
        if self.observed is None:
            return np.ones_like(self.states)
        return self.observed


def recession_probability(f: float, eps: float = 0.0) -> float:
    x = f + eps
    if not (math.isfinite(f) and math.isfinite(eps)):
        raise NonFiniteInput(f"factor draws must be finite, got f={f!r}, eps={eps!r}")
    return float(kernels.active.recession_probability(np.array([x]))[0])


def _factor_args(factor: FactorParams):
    return (float(factor.mu_f), float(factor.sigma_f), float(factor.sigma_eps), factor.perfect_sync)


def simulate_panels(factor: FactorParams, years: int, n_countries: int, master_seed: int,
                    lo: int, hi: int) -> np.ndarray:
    """States for runs ``lo..hi-1``, shape (runs, years, countries)."""
    if years < 1 or n_countries < 1:
        raise ValueError("years and n_countries must be >= 1")
    return kernels.active.simulate_panels(np.uint64(master_seed), lo, hi, years, n_countries,
                                          *_factor_args(factor))


def simulate_panel(factor: FactorParams, years: int, n_countries: int, master_seed: int,
                   run_index: int = 0, codes: Sequence[str] = ()) -> CyclePanel:
    states = simulate_panels(factor, years, n_countries, master_seed, run_index, run_index + 1)[0]
    return CyclePanel(states, tuple(codes))


def panel_batch(factor: FactorParams, years: int, n_countries: int, master_seed: int,
                n_panels: int, workers: int = 1) -> np.ndarray:
    rs = run_parallel(
        n_panels,
        lambda lo, hi: {"states": simulate_panels(factor, years, n_countries, master_seed, lo, hi)},
        workers=workers,
    )
    return rs.records["states"]


def write_panel_csv(panel: CyclePanel, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(panel.codes)
    mask = panel.mask
    for t in range(panel.years):
        w.writerow(["" if not mask[t, i] else int(panel.states[t, i]) for i in range(panel.countries)])
    return buf.getvalue()


def read_panel_csv(source: "str | Path | io.TextIOBase") -> CyclePanel:
    """Inverse of ``write_panel_csv``; empty cells are treated as missing."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_panel_csv(fh)
    rows = [r for r in csv.reader(source) if r and not r[0].lstrip().startswith("#")]
    if len(rows) < 2:
        raise MalformedCsv("panel needs a header row and at least one year")
    codes = tuple(c.strip() for c in rows[0])
    states = np.zeros((len(rows) - 1, len(codes)), dtype=bool)
    observed = np.ones_like(states)
    for t, row in enumerate(rows[1:]):
        if len(row) != len(codes):
            raise MalformedCsv(f"line {t + 2}: expected {len(codes)} cells, got {len(row)}")
        for i, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                observed[t, i] = False
            elif cell in ("0", "1"):
                states[t, i] = cell == "1"
            else:
                raise MalformedCsv(f"line {t + 2}, column {codes[i]}: expected 0/1, got {cell!r}")
    return CyclePanel(states, codes, None if observed.all() else observed)
