"""Synchronization measures for boolean recession panels.

All four measures are built from the pairwise 2x2 tables of country columns,
counted over years where both countries are observed. That makes missing
empirical cells a non-issue and lets the tetrachoric pass work on the (few)
distinct tables of a batch instead of every pair of every replication.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .cycles import CyclePanel, simulate_panels
from .engine import run_parallel
from .errors import DegenerateMargins, EmptyPanel, NotSymmetric, TooFewCountries
from .scenario import Scenario

RHO_CLAMP = 0.999
CONTINUITY = 0.5
SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class PairTable:
    a: int  # both in recession
    b: int  # first only
    c: int  # second only
    d: int  # neither

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0 or self.a + self.b + self.c + self.d < 1:
            raise ValueError(f"invalid 2x2 table {self}")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class SyncStats:
    recession_rate: float
    concordance_rate: float
    pca_share: float
    pca_tetrachoric_share: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.recession_rate, self.concordance_rate, self.pca_share,
                self.pca_tetrachoric_share)


# -- scalar building blocks ---------------------------------------------------

def recession_rate(panel: CyclePanel) -> float:
    mask = panel.mask
    total = int(mask.sum())
    if total == 0:
        raise EmptyPanel("panel has no observed cells")
    return int((panel.states & mask).sum()) / total


def concordance_rate(panel: CyclePanel) -> float:
    if panel.countries < 2:
        raise TooFewCountries("concordance needs at least two countries")
    a, b, c, d = _tables(panel.states[None], panel.mask[None])
    iu = np.triu_indices(panel.countries, 1)
    agree = (a + d)[0][iu].sum()
    seen = (a + b + c + d)[0][iu].sum()
    if seen == 0:
        raise EmptyPanel("no overlapping observations between any pair")
    return float(agree / seen)


def pearson_correlation_matrix(panel: CyclePanel) -> tuple[np.ndarray, np.ndarray]:
    """Pearson (phi) correlations of the 0/1 columns and a degeneracy mask.

    Pairs involving a column that is constant over their common years get 0.
    """
    if panel.countries < 2:
        raise TooFewCountries("correlation needs at least two countries")
    tabs = _tables(panel.states[None], panel.mask[None])
    corr, degenerate = _phi(*tabs)
    return corr[0], degenerate[0]


def tetrachoric_correlation(table: PairTable) -> tuple[float, bool]:
    """Latent bivariate-normal correlation of a 2x2 table, and whether the search converged.

    Zero cells get the 0.5 continuity correction. A result outside
    (-0.999, 0.999) is clamped and reported as not converged.
    """
    a, b, c, d = table.a, table.b, table.c, table.d
    if a + b == 0 or c + d == 0 or a + c == 0 or b + d == 0:
        raise DegenerateMargins(f"zero margin in {table}")
    cells = np.array([[a, b, c, d]], dtype=np.float64)
    if (cells == 0).any():
        cells += CONTINUITY
    rho, ok = kernels.active.tetrachoric(cells[:, 0], cells[:, 1], cells[:, 2], cells[:, 3])
    return float(rho[0]), bool(ok[0])


def eigenvalues(corr: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations (unsorted)."""
    corr = _check_symmetric(corr)
    vals, _ = kernels.active.jacobi_eigenvalues(corr[None])
    return vals[0]


def first_component_share(corr: np.ndarray) -> float:
    """Largest eigenvalue over the dimension; negative eigenvalues are kept as they are."""
    corr = _check_symmetric(corr)
    return float(eigenvalues(corr).max() / corr.shape[0])


def _check_symmetric(corr) -> np.ndarray:
    corr = np.asarray(corr, dtype=np.float64)
    if corr.ndim != 2 or corr.shape[0] != corr.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {corr.shape}")
    if not np.allclose(corr, corr.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise NotSymmetric("matrix is not symmetric within 1e-9")
    return corr


# -- batched core ---------------------------------------------------------------

def _tables(states: np.ndarray, observed: np.ndarray):
    """Pairwise-complete 2x2 counts, each of shape (R, N, N)."""
    x = states.astype(np.float64) * observed
    o = observed.astype(np.float64)
    xt = x.transpose(0, 2, 1)
    ot = o.transpose(0, 2, 1)
    a = xt @ x
    first = xt @ o
    second = ot @ x
    n = ot @ o
    b = first - a
    c = second - a
    d = n - a - b - c
    return tuple(np.rint(v).astype(np.int64) for v in (a, b, c, d))


def _phi(a, b, c, d):
    margins = (a + b) * (c + d) * (a + c) * (b + d)
    degenerate = margins == 0
    num = (a * d - b * c).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(degenerate, 0.0, num / np.sqrt(margins.astype(np.float64)))
    n = a.shape[-1]
    idx = np.arange(n)
    corr[:, idx, idx] = 1.0
    degenerate[:, idx, idx] = False
    return corr, degenerate


def _tetrachoric_matrices(a, b, c, d) -> np.ndarray:
    r, n, _ = a.shape
    iu = np.triu_indices(n, 1)
    cells = np.stack([a[:, iu[0], iu[1]], b[:, iu[0], iu[1]],
                      c[:, iu[0], iu[1]], d[:, iu[0], iu[1]]], axis=-1).reshape(-1, 4)
    degenerate = ((cells[:, 0] + cells[:, 1]) == 0) | ((cells[:, 2] + cells[:, 3]) == 0) \
        | ((cells[:, 0] + cells[:, 2]) == 0) | ((cells[:, 1] + cells[:, 3]) == 0)
    rho = np.zeros(cells.shape[0])
    live = ~degenerate
    if live.any():
        uniq, inverse = np.unique(cells[live], axis=0, return_inverse=True)
        u = uniq.astype(np.float64)
        u[(uniq == 0).any(axis=1)] += CONTINUITY
        solved, _ = kernels.active.tetrachoric(u[:, 0], u[:, 1], u[:, 2], u[:, 3])
        rho[live] = solved[inverse.ravel()]
    mats = np.zeros((r, n, n))
    mats[:, iu[0], iu[1]] = rho.reshape(r, -1)
    mats += mats.transpose(0, 2, 1)
    idx = np.arange(n)
    mats[:, idx, idx] = 1.0
    return mats


def batch_sync_stats(states: np.ndarray, observed: np.ndarray | None = None) -> np.ndarray:
    """Stats for a stack of panels, shape (R, 4) in SyncStats field order."""
    states = np.asarray(states, dtype=bool)
    if states.ndim != 3:
        raise ValueError("expected (replications, years, countries) states")
    r, _, n = states.shape
    if n < 2:
        raise TooFewCountries("sync stats need at least two countries")
    if observed is None:
        observed = np.ones_like(states)
    a, b, c, d = _tables(states, observed)
    obs_cells = observed.sum(axis=(1, 2))
    if (obs_cells == 0).any():
        raise EmptyPanel("panel has no observed cells")
    out = np.empty((r, 4))
    out[:, 0] = (states & observed).sum(axis=(1, 2)) / obs_cells
    iu = np.triu_indices(n, 1)
    seen = (a + b + c + d)[:, iu[0], iu[1]].sum(axis=1)
    out[:, 1] = (a + d)[:, iu[0], iu[1]].sum(axis=1) / np.maximum(seen, 1)
    pearson, _ = _phi(a, b, c, d)
    tetra = _tetrachoric_matrices(a, b, c, d)
    vals, _ = kernels.active.jacobi_eigenvalues(np.concatenate([pearson, tetra]))
    top = vals.max(axis=1) / n
    out[:, 2] = top[:r]
    out[:, 3] = top[r:]
    return out


def sync_stats(panel: CyclePanel) -> SyncStats:
    if panel.countries < 2:
        raise TooFewCountries("sync stats need at least two countries")
    return SyncStats(*map(float, batch_sync_stats(panel.states[None], panel.mask[None])[0]))


def replicate_sync_stats(scenario: Scenario, replications: int, years: int = 34,
                         workers: int = 1) -> np.ndarray:
    """Per-replication stats, shape (replications, 4); replication r uses substream r."""
    n = len(scenario.countries)

    def work(lo, hi):
        states = simulate_panels(scenario.factor, years, n, scenario.master_seed, lo, hi)
        return {"stats": batch_sync_stats(states)}

    rs = run_parallel(replications, work, workers=workers)
    return rs.records["stats"]


def median_sync_stats(scenario: Scenario, replications: int, years: int = 34,
                      workers: int = 1) -> SyncStats:
    """Componentwise median over simulated panels of ``years`` x countries."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    stats = replicate_sync_stats(scenario, replications, years, workers)
    return SyncStats(*map(float, np.median(stats, axis=0)))
