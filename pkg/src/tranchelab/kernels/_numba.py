"""numba kernels. Every function mirrors one in ``_numpy`` with identical draw order."""

import math

import numpy as np
from numba import njit

from ._common import (
    AS241_A, AS241_B, AS241_C, AS241_D, AS241_E, AS241_F,
    BISECT_TOL, GL_NODES, GL_PANELS, GL_WEIGHTS, GOLDEN_GAMMA, JACOBI_MAX_SWEEPS,
    JACOBI_TOL, MIX_MUL_1, MIX_MUL_2, RHO_CLAMP, RUN_STRIDE, TWO_POW_M53,
)

NAME = "numba"

_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _S30)) * MIX_MUL_1
    z = (z ^ (z >> _S27)) * MIX_MUL_2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _substream(seed, run):
    return _mix64(seed ^ (np.uint64(run) * RUN_STRIDE))


@njit(cache=True, inline="always")
def _next_uniform(state):
    state = state + GOLDEN_GAMMA
    z = _mix64(state)
    return state, ((z >> _S11) + 0.5) * TWO_POW_M53


@njit(cache=True, inline="always")
def _horner(coef, r):
    v = coef[7]
    for k in range(6, -1, -1):
        v = v * r + coef[k]
    return v


@njit(cache=True)
def _ndtri(p):
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _horner(AS241_A, r) / _horner(AS241_B, r)
    r = p if q < 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        v = _horner(AS241_C, r) / _horner(AS241_D, r)
    else:
        r -= 5.0
        v = _horner(AS241_E, r) / _horner(AS241_F, r)
    return -v if q < 0.0 else v


@njit(cache=True, inline="always")
def _recession_prob(x):
    if x >= 0.0:
        e = math.exp(-x)
        p = e / (1.0 + e)
    else:
        p = 1.0 / (1.0 + math.exp(x))
    return min(max(p, 0.0), 1.0)


@njit(cache=True)
def ndtri(u):
    out = np.empty(u.shape[0])
    for i in range(u.shape[0]):
        out[i] = _ndtri(u[i])
    return out


@njit(cache=True)
def recession_probability(x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _recession_prob(x[i])
    return out


@njit(cache=True, nogil=True)
def uniform_block(seed, lo, hi, count):
    out = np.empty((hi - lo, count))
    for r in range(lo, hi):
        s = _substream(seed, r)
        for k in range(count):
            s, out[r - lo, k] = _next_uniform(s)
    return out


@njit(cache=True, inline="always")
def _draw_panel(s, rec, eps, mu_f, sigma_f, sigma_eps, perfect):
    years, n = rec.shape
    for t in range(years):
        s, u = _next_uniform(s)
        f = mu_f + sigma_f * _ndtri(u)
        if perfect:
            s, u = _next_uniform(s)
            flag = u < _recession_prob(f)
            for i in range(n):
                rec[t, i] = flag
        else:
            for i in range(n):
                s, u = _next_uniform(s)
                eps[i] = sigma_eps * _ndtri(u)
            for i in range(n):
                s, u = _next_uniform(s)
                rec[t, i] = u < _recession_prob(f + eps[i])
    return s


@njit(cache=True, nogil=True)
def simulate_panels(seed, lo, hi, years, n, mu_f, sigma_f, sigma_eps, perfect):
    out = np.empty((hi - lo, years, n), dtype=np.bool_)
    eps = np.empty(n)
    for r in range(lo, hi):
        s = _substream(seed, r)
        _draw_panel(s, out[r - lo], eps, mu_f, sigma_f, sigma_eps, perfect)
    return out


@njit(cache=True, nogil=True)
def simulate_cohorts(seed, lo, hi, maturity, mu_f, sigma_f, sigma_eps, perfect,
                     pd_n, pd_r, lgd_n, lgd_r):
    n = pd_n.shape[0]
    default_year = np.zeros((hi - lo, n), dtype=np.int16)
    lgd = np.zeros((hi - lo, n))
    rec = np.empty((maturity, n), dtype=np.bool_)
    eps = np.empty(n)
    for r in range(lo, hi):
        s = _substream(seed, r)
        s = _draw_panel(s, rec, eps, mu_f, sigma_f, sigma_eps, perfect)
        for i in range(n):
            for t in range(maturity):
                s, u = _next_uniform(s)
                if default_year[r - lo, i] == 0:
                    p = pd_r[i] if rec[t, i] else pd_n[i]
                    if u < p:
                        default_year[r - lo, i] = t + 1
                        lgd[r - lo, i] = lgd_r[i] if rec[t, i] else lgd_n[i]
    return default_year, lgd


@njit(cache=True, inline="always")
def _ncdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@njit(cache=True)
def _bvn(h, k, rho):
    theta = math.asin(rho)
    base = _ncdf(h) * _ncdf(k)
    if theta == 0.0:
        return base
    hk = h * k
    hs = h * h + k * k
    width = theta / GL_PANELS
    acc = 0.0
    for p in range(GL_PANELS):
        mid = width * (p + 0.5)
        for j in range(GL_NODES.shape[0]):
            th = mid + 0.5 * width * GL_NODES[j]
            sn = math.sin(th)
            cs2 = 1.0 - sn * sn
            acc += GL_WEIGHTS[j] * math.exp(-(hs - 2.0 * hk * sn) / (2.0 * cs2))
    return base + acc * 0.5 * width / (2.0 * math.pi)


@njit(cache=True)
def bvn_cdf(h, k, rho):
    out = np.empty(h.shape[0])
    for i in range(h.shape[0]):
        out[i] = _bvn(h[i], k[i], rho[i])
    return out


@njit(cache=True, nogil=True)
def tetrachoric(a, b, c, d):
    m = a.shape[0]
    rho = np.empty(m)
    ok = np.empty(m, dtype=np.bool_)
    for i in range(m):
        n = a[i] + b[i] + c[i] + d[i]
        z1 = _ndtri((a[i] + b[i]) / n)
        z2 = _ndtri((a[i] + c[i]) / n)
        target = a[i] / n
        lo = -RHO_CLAMP
        hi = RHO_CLAMP
        if _bvn(z1, z2, hi) <= target:
            rho[i] = hi
            ok[i] = False
            continue
        if _bvn(z1, z2, lo) >= target:
            rho[i] = lo
            ok[i] = False
            continue
        while hi - lo > BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if _bvn(z1, z2, mid) < target:
                lo = mid
            else:
                hi = mid
        rho[i] = 0.5 * (lo + hi)
        ok[i] = True
    return rho, ok


@njit(cache=True, nogil=True)
def jacobi_eigenvalues(mats):
    nb, n, _ = mats.shape
    vals = np.empty((nb, n))
    sweeps = np.zeros(nb, dtype=np.int64)
    for bi in range(nb):
        a = mats[bi].copy()
        for sweep in range(JACOBI_MAX_SWEEPS + 1):
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off = max(off, abs(a[p, q]))
            if off < JACOBI_TOL or sweep == JACOBI_MAX_SWEEPS:
                break
            sweeps[bi] += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if tau >= 0.0:
                        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * aqk
                        a[q, k] = s * apk + c * aqk
        for k in range(n):
            vals[bi, k] = a[k, k]
    return vals, sweeps
