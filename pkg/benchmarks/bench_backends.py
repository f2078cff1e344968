"""Time every hot kernel under both backends.

Usage: python3 benchmarks/bench_backends.py [--repeat 3] [--scale 1.0]

The first numba call compiles (or loads the on-disk cache), so each kernel is
warmed up once before timing. Reported figure is the best of ``--repeat``.
"""

import argparse
import time

import numpy as np

from tranchelab import kernels
from tranchelab.scenario import canonical_dataset

SEED = np.uint64(20240101)


def cases(scale):
    cs = canonical_dataset()
    params = [np.array([getattr(c, f) for c in cs]) for f in
              ("pd_normal", "pd_recession", "lgd_normal", "lgd_recession")]
    runs = max(1, int(100_000 * scale))
    panels = max(1, int(2_000 * scale))
    rng = np.random.default_rng(0)
    cells = rng.integers(0, 30, size=(4, max(1, int(20_000 * scale)))).astype(float) + 0.5
    h, k = rng.normal(size=(2, max(1, int(200_000 * scale))))
    rho = rng.uniform(-0.99, 0.99, h.size)
    mats = np.stack([np.corrcoef(rng.normal(size=(34, 18)), rowvar=False)
                     for _ in range(max(1, int(2_000 * scale)))])
    u = rng.random(max(1, int(1_000_000 * scale)))
    return {
        f"ndtri x{u.size}": lambda m: m.ndtri(u),
        f"simulate_panels {panels}x34x18": lambda m: m.simulate_panels(SEED, 0, panels, 34, 18, 3.0, 1.9, 0.15, False),
        f"simulate_cohorts {runs}x5y": lambda m: m.simulate_cohorts(SEED, 0, runs, 5, 3.0, 1.9, 0.15, False, *params),
        f"bvn_cdf x{h.size}": lambda m: m.bvn_cdf(h, k, rho),
        f"tetrachoric x{cells.shape[1]}": lambda m: m.tetrachoric(*cells),
        f"jacobi {mats.shape[0]}x18x18": lambda m: m.jacobi_eigenvalues(mats),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply problem sizes")
    args = ap.parse_args(argv)

    mods = {name: kernels.load(name) for name in kernels.BACKENDS}
    print(f"{'kernel':<34}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for label, fn in cases(args.scale).items():
        t = {}
        for name, mod in mods.items():
            fn(mod)
            t[name] = best_of(lambda: fn(mod), args.repeat)
        print(f"{label:<34}{t['numba']:>10.4f}{t['numpy']:>10.4f}{t['numpy'] / t['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
