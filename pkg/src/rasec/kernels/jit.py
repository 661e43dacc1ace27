"""Numba implementations of the hot kernels (twins of :mod:`.vec`)."""
import math

import numpy as np
from numba import njit

from .gk21 import INITIAL_PANELS, WG, WGK, XGK

LN2 = math.log(2.0)
BESSEL_SWITCH = 15.0
MARCUM_TAIL_SPAN = 40.0


# ---------------------------------------------------------------------------
# Bessel
# ---------------------------------------------------------------------------

@njit(cache=True)
def _asymptotic_scaled(x, nu2):
    total = 1.0
    term = 1.0
    for k in range(1, 41):
        ratio = ((2 * k - 1) ** 2 - nu2) / (8.0 * k * x)
        if abs(ratio) >= 1.0:
            break
        term *= ratio
        total += term
    return total / math.sqrt(2.0 * math.pi * x)


@njit(cache=True)
def i0e_scalar(x):
    if x < BESSEL_SWITCH:
        q = 0.25 * x * x
        term = 1.0
        total = 1.0
        for k in range(1, 65):
            term *= q / (k * k)
            total += term
            if term < 1e-18 * total:
                break
        return total * math.exp(-x)
    return _asymptotic_scaled(x, 0.0)


@njit(cache=True)
def i1e_scalar(x):
    if x < BESSEL_SWITCH:
        q = 0.25 * x * x
        term = 1.0
        total = 1.0
        for k in range(1, 65):
            term *= q / (k * (k + 1.0))
            total += term
            if term < 1e-18 * total:
                break
        return 0.5 * x * total * math.exp(-x)
    return _asymptotic_scaled(x, 4.0)


@njit(cache=True)
def i0e(x):
    flat = x.ravel()
    out = np.empty(flat.size)
    for i in range(flat.size):
        out[i] = i0e_scalar(flat[i])
    return out.reshape(x.shape)


@njit(cache=True)
def i1e(x):
    flat = x.ravel()
    out = np.empty(flat.size)
    for i in range(flat.size):
        out[i] = i1e_scalar(flat[i])
    return out.reshape(x.shape)


@njit(cache=True)
def ncx2_unit_pdf_scalar(u, k):
    ku = (1.0 + k) * u
    d = math.sqrt(k) - math.sqrt(ku)
    return (1.0 + k) * math.exp(-d * d) * i0e_scalar(2.0 * math.sqrt(k * ku))


@njit(cache=True)
def ncx2_unit_pdf(u, k):
    flat = u.ravel()
    out = np.empty(flat.size)
    for i in range(flat.size):
        out[i] = ncx2_unit_pdf_scalar(flat[i], k)
    return out.reshape(u.shape)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod (single problem, integrand passed as a jitted
# function f(x, params))
# ---------------------------------------------------------------------------

@njit
def _gk21(f, lo, hi, p):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    fc = f(c, p)
    resk = WGK[10] * fc
    resg = 0.0
    for j in range(10):
        dx = h * XGK[j]
        f1 = f(c - dx, p)
        f2 = f(c + dx, p)
        resk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    return resk * h, abs((resk - resg) * h)


@njit
def adaptive(f, a, b, p, atol, rtol, limit):
    """Returns (value, error); value is NaN when the budget is exhausted."""
    total = b - a
    if total <= 0.0:
        return 0.0, 0.0
    cap = 2 * limit + INITIAL_PANELS + 2
    lo_s = np.empty(cap)
    hi_s = np.empty(cap)
    k_s = np.empty(cap)
    e_s = np.empty(cap)
    top = 0
    coarse = 0.0
    for i in range(INITIAL_PANELS):
        lo = a + total * i / INITIAL_PANELS
        hi = a + total * (i + 1) / INITIAL_PANELS
        k, e = _gk21(f, lo, hi, p)
        lo_s[top] = lo
        hi_s[top] = hi
        k_s[top] = k
        e_s[top] = e
        top += 1
        coarse += k
    tol = max(atol, rtol * abs(coarse))
    value = 0.0
    error = 0.0
    splits = 0
    while top > 0:
        top -= 1
        lo = lo_s[top]
        hi = hi_s[top]
        k = k_s[top]
        e = e_s[top]
        if not (math.isfinite(k) and math.isfinite(e)):
            return np.nan, np.inf
        width = hi - lo
        if e <= tol * width / total or width <= 1e-14 * total:
            value += k
            error += e
            continue
        splits += 1
        if splits > limit:
            return np.nan, np.inf
        mid = 0.5 * (lo + hi)
        k1, e1 = _gk21(f, lo, mid, p)
        k2, e2 = _gk21(f, mid, hi, p)
        lo_s[top] = mid
        hi_s[top] = hi
        k_s[top] = k2
        e_s[top] = e2
        lo_s[top + 1] = lo
        hi_s[top + 1] = mid
        k_s[top + 1] = k1
        e_s[top + 1] = e1
        top += 2
    return value, error


# ---------------------------------------------------------------------------
# Marcum Q_1
# ---------------------------------------------------------------------------

@njit
def _marcum_integrand(d, p):
    # offset variable d = t - a keeps the Gaussian factor free of cancellation
    a = p[0]
    t = a + d
    return t * math.exp(-0.5 * d * d) * i0e_scalar(a * t)


@njit
def marcum_q1_scalar(a, b, rtol, limit):
    """Returns (Q1, 1 - Q1, ok)."""
    if b == 0.0:
        return 1.0, 0.0, True
    if a == 0.0:
        return math.exp(-0.5 * b * b), -math.expm1(-0.5 * b * b), True
    p = (a,)
    if b < a:
        # below a - span the integrand is under exp(-span^2 / 2)
        lo = max(-a, -MARCUM_TAIL_SPAN)
        if lo >= b - a:
            return 1.0, 0.0, True
        v, _ = adaptive(_marcum_integrand, lo, b - a, p, 0.0, rtol, limit)
        if not math.isfinite(v):
            return np.nan, np.nan, False
        v = min(max(v, 0.0), 1.0)
        return 1.0 - v, v, True
    v, _ = adaptive(_marcum_integrand, b - a, b - a + MARCUM_TAIL_SPAN, p, 0.0, rtol, limit)
    if not math.isfinite(v):
        return np.nan, np.nan, False
    v = min(max(v, 0.0), 1.0)
    return v, 1.0 - v, True


@njit
def marcum_q1_pair(a, b, rtol, limit):
    n = a.size
    q = np.empty(n)
    pc = np.empty(n)
    ok = np.empty(n, dtype=np.bool_)
    for i in range(n):
        q[i], pc[i], ok[i] = marcum_q1_scalar(a[i], b[i], rtol, limit)
    return q, pc, ok


# ---------------------------------------------------------------------------
# Average secrecy capacity integrals
# ---------------------------------------------------------------------------

@njit
def _cap_inner(v, p):
    cap_b, c_e, k_e = p
    return (cap_b - math.log1p(c_e * v)) * ncx2_unit_pdf_scalar(v, k_e)


@njit
def _cap_outer(u, p):
    k_b, k_e, c_b, c_e, ratio, t_v, in_atol, in_rtol, limit = p
    upper = min(ratio * u, t_v)
    inner, _ = adaptive(_cap_inner, 0.0, upper, (math.log1p(c_b * u), c_e, k_e),
                        in_atol, in_rtol, limit)
    return ncx2_unit_pdf_scalar(u, k_b) * inner


@njit
def capacity_nested(k_b, k_e, c_b, c_e, ratio, t_u, t_v, atol, rtol, limit):
    p = (k_b, k_e, c_b, c_e, ratio, t_v, 0.1 * atol, 0.1 * rtol, limit)
    v, e = adaptive(_cap_outer, 0.0, t_u, p, atol, rtol, limit)
    return v, e, math.isfinite(v)


@njit
def _cap_single(u, p):
    c_b, k_b = p
    return math.log1p(c_b * u) * ncx2_unit_pdf_scalar(u, k_b)


@njit
def capacity_single(k_b, c_b, t_u, atol, rtol, limit):
    v, e = adaptive(_cap_single, 0.0, t_u, (c_b, k_b), atol, rtol, limit)
    return v, e, math.isfinite(v)


# ---------------------------------------------------------------------------
# Monte Carlo reductions
# ---------------------------------------------------------------------------

@njit(cache=True)
def _capacity_at(z, i, link_b, link_e, gamma):
    gb, bre, bim, sb = link_b
    ge, ere, eim, se = link_e
    xb = bre + sb * z[0, i]
    yb = bim + sb * z[1, i]
    xe = ere + se * z[2, i]
    ye = eim + se * z[3, i]
    c = (math.log1p(gamma * gb * (xb * xb + yb * yb))
         - math.log1p(gamma * ge * (xe * xe + ye * ye))) / LN2
    return c if c > 0.0 else 0.0


@njit(cache=True)
def capacity_samples(z, link_b, link_e, gamma):
    n = z.shape[1]
    out = np.empty(n)
    for i in range(n):
        out[i] = _capacity_at(z, i, link_b, link_e, gamma)
    return out


@njit(cache=True)
def capacity_moments(z, link_b, link_e, gamma):
    # Welford update, single pass.
    n = z.shape[1]
    mean = 0.0
    m2 = 0.0
    for i in range(n):
        c = _capacity_at(z, i, link_b, link_e, gamma)
        d = c - mean
        mean += d / (i + 1)
        m2 += d * (c - mean)
    return mean, m2


@njit(cache=True)
def outage_counts(z, link_b, link_e, gamma, thresholds):
    n = z.shape[1]
    m = thresholds.size
    counts = np.zeros(m, dtype=np.int64)
    for i in range(n):
        c = _capacity_at(z, i, link_b, link_e, gamma)
        for j in range(m):
            if c < thresholds[j]:
                counts[j] += 1
    return counts
