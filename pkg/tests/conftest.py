import numpy as np
import pytest

from tranchelab import kernels
from tranchelab.scenario import Scenario, canonical_dataset, default_scenario


@pytest.fixture(params=kernels.BACKENDS)
def backend(request):
    """Run a test once per kernel backend, restoring the active one afterwards."""
    previous = kernels.backend_name
    kernels.use(request.param)
    yield request.param
    kernels.use(previous)


@pytest.fixture(scope="session")
def countries():
    return canonical_dataset()


@pytest.fixture
def scenario():
    return default_scenario(n_runs=2000, master_seed=11)


def solo(country, **kw) -> Scenario:
    return Scenario(countries=(country,), **kw)


def splitmix_reference(seed: int, index: int, count: int) -> list[float]:
    """Textbook SplitMix64 on Python ints; independent of both kernel sets."""
    mask = (1 << 64) - 1

    def mix(z):
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    state = mix(seed ^ ((index * 0xD1B54A32D192ED03) & mask))
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & mask
        out.append(((mix(state) >> 11) + 0.5) / 2**53)
    return out


def bvn_oracle(h: float, k: float, rho: float) -> float:
    """P(X<h, Y<k) by Plackett's identity: Phi(h)Phi(k) + integral of the density over r in [0, rho]."""
    from scipy.integrate import quad
    from scipy.special import ndtr

    def density(r):
        s = 1.0 - r * r
        return np.exp(-(h * h - 2 * r * h * k + k * k) / (2 * s)) / (2 * np.pi * np.sqrt(s))

    val, _ = quad(density, 0.0, rho, epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(ndtr(h) * ndtr(k) + val)


def grid_tetrachoric(a: int, b: int, c: int, d: int, step: float = 1e-5) -> float:
    """Maximize the 2x2 multinomial likelihood over a rho grid (coarse pass, then `step`)."""
    from scipy.special import ndtri
    n = a + b + c + d
    h, k = ndtri((a + b) / n), ndtri((a + c) / n)
    pa, pb = (a + b) / n, (a + c) / n

    def loglik(rho):
        p11 = bvn_oracle(h, k, rho)
        cells = (p11, pa - p11, pb - p11, 1.0 - pa - pb + p11)
        if min(cells) <= 0:
            return -np.inf
        return sum(x * np.log(p) for x, p in zip((a, b, c, d), cells))

    coarse = np.arange(-0.999, 0.999 + 1e-12, 1e-3)
    best = coarse[int(np.argmax([loglik(r) for r in coarse]))]
    fine = np.arange(max(-0.999, best - 2e-3), min(0.999, best + 2e-3) + step / 2, step)
    return float(fine[int(np.argmax([loglik(r) for r in fine]))])


def recession_share(mu=3.0, sigma_f=1.9, sigma_eps=0.15) -> float:
    """Marginal recession probability E[1/(1+exp(F+eps))] by quadrature (F+eps is normal)."""
    from scipy.integrate import quad
    s = float(np.hypot(sigma_f, sigma_eps))
    dens = lambda x: np.exp(-0.5 * ((x - mu) / s) ** 2) / (s * np.sqrt(2 * np.pi))
    val, _ = quad(lambda x: dens(x) / (1 + np.exp(x)), mu - 12 * s, mu + 12 * s, epsabs=1e-14)
    return val


def closed_form_country(c, q: float, maturity: int, coupon: float | None = None) -> dict:
    """Geometric default timing with the regime drawn afresh every year.

    Returns the yearly hazard, cumulative PD, mean LGD at default and expected
    loss (face-only, or with lost coupons when ``coupon`` is given).
    """
    h = (1 - q) * c.pd_normal + q * c.pd_recession
    per_year_loss = (1 - q) * c.pd_normal * c.lgd_normal + q * c.pd_recession * c.lgd_recession
    el = 0.0
    for k in range(1, maturity + 1):
        scale = 1.0 if coupon is None else 1.0 + coupon * (maturity - k + 1)
        el += (1 - h) ** (k - 1) * per_year_loss * scale
    cum = 1 - (1 - h) ** maturity
    return {"h": h, "cum_pd": cum, "lgd": per_year_loss / h, "el": el,
            "spread": -np.log1p(-cum) / maturity * per_year_loss / h + 0.0015}


ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
