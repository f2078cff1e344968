"""Pure-numpy kernels, vectorized across runs (or across batch elements).

Random draws are consumed in exactly the same order as the numba kernels, so
both backends replay the same substreams.
"""

import numpy as np
from scipy.special import ndtr

from ._common import (
    AS241_A, AS241_B, AS241_C, AS241_D, AS241_E, AS241_F,
    BISECT_TOL, GL_NODES, GL_PANELS, GL_WEIGHTS, GOLDEN_GAMMA, JACOBI_MAX_SWEEPS,
    JACOBI_TOL, MIX_MUL_1, MIX_MUL_2, RHO_CLAMP, RUN_STRIDE, TWO_POW_M53,
)

NAME = "numpy"

_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


def _mix64(z):
    z = (z ^ (z >> _S30)) * MIX_MUL_1
    z = (z ^ (z >> _S27)) * MIX_MUL_2
    return z ^ (z >> _S31)


def _substreams(seed, lo, hi):
    runs = np.arange(lo, hi, dtype=np.uint64)
    return _mix64(np.uint64(seed) ^ (runs * RUN_STRIDE))


class _Streams:
    """A vector of SplitMix64 states advanced in lock-step."""

    def __init__(self, seed, lo, hi):
        self.state = _substreams(seed, lo, hi)

    def uniform(self):
        self.state = self.state + GOLDEN_GAMMA
        z = _mix64(self.state)
        return ((z >> _S11) + 0.5) * TWO_POW_M53


def _horner(coef, r):
    v = np.full_like(r, coef[7])
    for k in range(6, -1, -1):
        v = v * r + coef[k]
    return v


def ndtri(u):
    u = np.asarray(u, dtype=np.float64)
    q = u - 0.5
    central = np.abs(q) <= 0.425
    out = np.empty_like(u)

    r = 0.180625 - q[central] * q[central]
    out[central] = q[central] * _horner(AS241_A, r) / _horner(AS241_B, r)

    tail = ~central
    qt = q[tail]
    r = np.where(qt < 0.0, u[tail], 1.0 - u[tail])
    r = np.sqrt(-np.log(r))
    v = np.empty_like(r)
    near = r <= 5.0
    rn = r[near] - 1.6
    v[near] = _horner(AS241_C, rn) / _horner(AS241_D, rn)
    rf = r[~near] - 5.0
    v[~near] = _horner(AS241_E, rf) / _horner(AS241_F, rf)
    out[tail] = np.where(qt < 0.0, -v, v)
    return out


def recession_probability(x):
    x = np.asarray(x, dtype=np.float64)
    pos = x >= 0.0
    e = np.exp(-np.abs(x))
    with np.errstate(over="ignore"):
        p = np.where(pos, e / (1.0 + e), 1.0 / (1.0 + e))
    return np.clip(p, 0.0, 1.0)


def uniform_block(seed, lo, hi, count):
    st = _Streams(seed, lo, hi)
    return np.stack([st.uniform() for _ in range(count)], axis=1) if count else np.empty((hi - lo, 0))


def _draw_panels(st, years, n, mu_f, sigma_f, sigma_eps, perfect):
    m = st.state.shape[0]
    rec = np.empty((m, years, n), dtype=bool)
    for t in range(years):
        f = mu_f + sigma_f * ndtri(st.uniform())
        if perfect:
            flag = st.uniform() < recession_probability(f)
            rec[:, t, :] = flag[:, None]
        else:
            eps = np.stack([sigma_eps * ndtri(st.uniform()) for _ in range(n)], axis=1)
            for i in range(n):
                rec[:, t, i] = st.uniform() < recession_probability(f + eps[:, i])
    return rec


def simulate_panels(seed, lo, hi, years, n, mu_f, sigma_f, sigma_eps, perfect):
    return _draw_panels(_Streams(seed, lo, hi), years, n, mu_f, sigma_f, sigma_eps, perfect)


def simulate_cohorts(seed, lo, hi, maturity, mu_f, sigma_f, sigma_eps, perfect,
                     pd_n, pd_r, lgd_n, lgd_r):
    st = _Streams(seed, lo, hi)
    n = pd_n.shape[0]
    rec = _draw_panels(st, maturity, n, mu_f, sigma_f, sigma_eps, perfect)
    default_year = np.zeros((hi - lo, n), dtype=np.int16)
    lgd = np.zeros((hi - lo, n))
    for i in range(n):
        for t in range(maturity):
            u = st.uniform()
            in_rec = rec[:, t, i]
            hit = (default_year[:, i] == 0) & (u < np.where(in_rec, pd_r[i], pd_n[i]))
            default_year[hit, i] = t + 1
            lgd[hit, i] = np.where(in_rec[hit], lgd_r[i], lgd_n[i])
    return default_year, lgd


def bvn_cdf(h, k, rho):
    h, k, rho = (np.asarray(v, dtype=np.float64) for v in (h, k, rho))
    theta = np.arcsin(rho)
    base = ndtr(h) * ndtr(k)
    hk = h * k
    hs = h * h + k * k
    width = theta / GL_PANELS
    acc = np.zeros_like(theta)
    for p in range(GL_PANELS):
        mid = width * (p + 0.5)
        for j in range(GL_NODES.shape[0]):
            sn = np.sin(mid + 0.5 * width * GL_NODES[j])
            acc += GL_WEIGHTS[j] * np.exp(-(hs - 2.0 * hk * sn) / (2.0 * (1.0 - sn * sn)))
    return base + acc * 0.5 * width / (2.0 * np.pi)


def tetrachoric(a, b, c, d):
    a, b, c, d = (np.asarray(v, dtype=np.float64) for v in (a, b, c, d))
    n = a + b + c + d
    z1 = ndtri((a + b) / n)
    z2 = ndtri((a + c) / n)
    target = a / n
    lo = np.full_like(target, -RHO_CLAMP)
    hi = np.full_like(target, RHO_CLAMP)
    top = bvn_cdf(z1, z2, hi) <= target
    bottom = bvn_cdf(z1, z2, lo) >= target
    live = hi - lo > BISECT_TOL
    while live.any():
        mid = 0.5 * (lo + hi)
        below = bvn_cdf(z1, z2, mid) < target
        lo = np.where(live & below, mid, lo)
        hi = np.where(live & ~below, mid, hi)
        live = hi - lo > BISECT_TOL
    rho = 0.5 * (lo + hi)
    rho = np.where(top, RHO_CLAMP, np.where(bottom, -RHO_CLAMP, rho))
    return rho, ~(top | bottom)


def jacobi_eigenvalues(mats):
    a = np.array(mats, dtype=np.float64, copy=True)
    nb, n, _ = a.shape
    iu = np.triu_indices(n, 1)
    sweeps = np.zeros(nb, dtype=np.int64)
    for _ in range(JACOBI_MAX_SWEEPS):
        active = np.abs(a[:, iu[0], iu[1]]).max(axis=1, initial=0.0) >= JACOBI_TOL
        if not active.any():
            break
        sweeps += active
        sub = a[active]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = sub[:, p, q]
                nz = apq != 0.0
                tau = np.divide(sub[:, q, q] - sub[:, p, p], 2.0 * apq,
                                out=np.zeros_like(apq), where=nz)
                root = np.sqrt(1.0 + tau * tau)
                with np.errstate(divide="ignore"):
                    t = np.where(tau >= 0.0, 1.0 / (tau + root), -1.0 / (-tau + root))
                t = np.where(nz, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cp = sub[:, :, p].copy()
                cq = sub[:, :, q]
                sub[:, :, p] = c[:, None] * cp - s[:, None] * cq
                sub[:, :, q] = s[:, None] * cp + c[:, None] * cq
                rp = sub[:, p, :].copy()
                rq = sub[:, q, :]
                sub[:, p, :] = c[:, None] * rp - s[:, None] * rq
                sub[:, q, :] = s[:, None] * rp + c[:, None] * rq
        a[active] = sub
    return np.diagonal(a, axis1=1, axis2=2).copy(), sweeps
