"""The compiled and pure-numpy kernel sets must agree."""

import numpy as np
import pytest

from tranchelab import kernels
from tranchelab.scenario import canonical_dataset

NB = kernels.load("numba")
NP = kernels.load("numpy")
SEED = np.uint64(0x5EED)


def test_uniform_blocks_identical():
    assert np.array_equal(NB.uniform_block(SEED, 3, 40, 17), NP.uniform_block(SEED, 3, 40, 17))


def test_ndtri_and_logistic_close():
    u = NP.uniform_block(SEED, 0, 50, 40).ravel()
    assert np.allclose(NB.ndtri(u), NP.ndtri(u), rtol=0, atol=1e-14)
    x = np.linspace(-40, 40, 801)
    assert np.allclose(NB.recession_probability(x), NP.recession_probability(x), rtol=1e-15, atol=0)


@pytest.mark.parametrize("perfect", [False, True])
def test_panels_identical(perfect):
    a = NB.simulate_panels(SEED, 0, 500, 34, 18, 3.0, 1.9, 0.15, perfect)
    b = NP.simulate_panels(SEED, 0, 500, 34, 18, 3.0, 1.9, 0.15, perfect)
    assert np.array_equal(a, b)


def test_cohorts_identical():
    cs = canonical_dataset()
    params = [np.array([getattr(c, f) for c in cs]) for f in
              ("pd_normal", "pd_recession", "lgd_normal", "lgd_recession")]
    a = NB.simulate_cohorts(SEED, 100, 3100, 5, 3.0, 1.9, 0.15, False, *params)
    b = NP.simulate_cohorts(SEED, 100, 3100, 5, 3.0, 1.9, 0.15, False, *params)
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1], b[1])


def test_bvn_and_tetrachoric_close():
    rng = np.random.default_rng(0)
    h, k = rng.normal(size=(2, 300))
    rho = rng.uniform(-0.999, 0.999, 300)
    assert np.allclose(NB.bvn_cdf(h, k, rho), NP.bvn_cdf(h, k, rho), rtol=0, atol=1e-13)
    cells = rng.integers(1, 40, size=(4, 300)).astype(float)
    ra, oka = NB.tetrachoric(*cells)
    rb, okb = NP.tetrachoric(*cells)
    # bisection can branch differently in the last ulp of the bracket
    assert np.allclose(ra, rb, rtol=0, atol=2e-8)
    assert np.array_equal(oka, okb)


def test_jacobi_close():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(20, 40, 18))
    mats = np.stack([np.corrcoef(m, rowvar=False) for m in x])
    va, _ = NB.jacobi_eigenvalues(mats)
    vb, _ = NP.jacobi_eigenvalues(mats)
    assert np.allclose(np.sort(va, axis=1), np.sort(vb, axis=1), rtol=0, atol=1e-11)


def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path
    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_backends.py"
    spec = importlib.util.spec_from_file_location("bench_backends", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    bench.main(["--repeat", "1", "--scale", "0.001"])
    out = capsys.readouterr().out.splitlines()
    assert out[0].split() == ["kernel", "numba", "s", "numpy", "s", "speedup"]
    assert len(out) == 7
