"""Deterministic Monte Carlo orchestration.

Every run ``r`` draws from its own SplitMix64 substream whose starting state
is ``mix64(master_seed XOR (r * 0xD1B54A32D192ED03))`` where ``mix64`` is the
SplitMix64 output finalizer. Uniforms are ``((x >> 11) + 0.5) / 2**53`` and
normals come from the AS 241 inverse normal CDF, so a substream can be
replayed in any language from the run index alone.

Runs are grouped into fixed-size chunks. Chunk boundaries depend only on the
run count, never on the worker count, and results are written back by run
index, so output arrays are bit-identical for any ``workers``.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import __version__, kernels
from .errors import EmptyInput, EmptyPlan

CHUNK_RUNS = 4096
MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream(master_seed: int, run_index: int) -> int:
    """Starting generator state of run ``run_index`` (an unsigned 64-bit int)."""
    return _mix64((master_seed ^ ((run_index * 0xD1B54A32D192ED03) & MASK64)) & MASK64)


def uniforms(master_seed: int, run_index: int, count: int) -> np.ndarray:
    """First ``count`` uniforms of one substream, as consumed by the simulators."""
    return kernels.active.uniform_block(np.uint64(master_seed), run_index, run_index + 1, count)[0]


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


@dataclass
class ResultSet:
    """Per-run arrays (leading axis = run index) plus provenance."""

    records: dict[str, np.ndarray]
    n_runs: int
    provenance: dict[str, str] = field(default_factory=dict)

    def digest(self) -> str:
        h = hashlib.sha256()
        for key in sorted(self.records):
            arr = np.ascontiguousarray(self.records[key])
            h.update(key.encode())
            h.update(str(arr.dtype).encode())
            h.update(str(arr.shape).encode())
            h.update(arr.tobytes())
        return h.hexdigest()


def chunks(n_runs: int, chunk: int = CHUNK_RUNS) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, n_runs)) for lo in range(0, n_runs, chunk)]


def run_parallel(
    n_runs: int,
    work: Callable[[int, int], Mapping[str, np.ndarray]],
    workers: int = 1,
    provenance: Mapping[str, str] | None = None,
    chunk: int = CHUNK_RUNS,
) -> ResultSet:
    """Evaluate ``work(lo, hi)`` over fixed chunks and stitch the results by run index.

    ``work`` must be a pure function of the run range: run ``r``'s outputs may
    depend only on ``r``'s substream. numba kernels release the GIL, so a
    thread pool gives real parallelism.
    """
    if n_runs < 1:
        raise EmptyPlan("n_runs must be >= 1")
    spans = chunks(n_runs, chunk)
    if workers <= 1 or len(spans) == 1:
        parts = [work(lo, hi) for lo, hi in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda span: work(*span), spans))
    records = {key: np.concatenate([p[key] for p in parts], axis=0) for key in parts[0]}
    prov = {"tranchelab": __version__, "runs": str(n_runs)}
    prov.update(provenance or {})
    return ResultSet(records=records, n_runs=n_runs, provenance=prov)


def fsum_mean(values: np.ndarray) -> float:
    """Mean via exactly-rounded summation in run-index order."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise EmptyInput("no values to average")
    return math.fsum(values.tolist()) / values.size


def mean_and_se(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=np.float64).ravel()
    mean = fsum_mean(values)
    n = values.size
    if n < 2:
        return mean, 0.0
    dev = values - mean
    var = math.fsum((dev * dev).tolist()) / (n - 1)
    return mean, math.sqrt(var / n)
