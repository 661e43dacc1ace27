"""Vectorised numpy implementations of the hot kernels.

Every function here has a twin of the same name and signature in
:mod:`rasec.kernels.jit`.  The adaptive integrator refines all active
intervals of all problems in one numpy pass per level (breadth first); the
numba twin walks the same interval tree depth first.
"""
import numpy as np

from .gk21 import GAUSS_W, INITIAL_PANELS, KRONROD_W, NODES

LN2 = np.log(2.0)
BESSEL_SWITCH = 15.0
_SERIES_TERMS = 64
_ASYMPTOTIC_TERMS = 40


# ---------------------------------------------------------------------------
# Exponentially scaled modified Bessel functions
# ---------------------------------------------------------------------------

def _asymptotic_scaled(x, nu2):
    # e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k a_k(nu) / x^k, truncated at the
    # smallest term.
    total = np.ones_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        ratio = ((2 * k - 1) ** 2 - nu2) / (8.0 * k * x)
        active &= np.abs(ratio) < 1.0
        term = np.where(active, term * ratio, 0.0)
        total += term
    return total / np.sqrt(2.0 * np.pi * x)


def i0e(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x < BESSEL_SWITCH
    xs = x[small]
    q = 0.25 * xs * xs
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    for k in range(1, _SERIES_TERMS + 1):
        term = term * q / (k * k)
        total += term
    out[small] = total * np.exp(-xs)
    out[~small] = _asymptotic_scaled(x[~small], 0.0)
    return out


def i1e(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x < BESSEL_SWITCH
    xs = x[small]
    q = 0.25 * xs * xs
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    for k in range(1, _SERIES_TERMS + 1):
        term = term * q / (k * (k + 1.0))
        total += term
    out[small] = 0.5 * xs * total * np.exp(-xs)
    out[~small] = _asymptotic_scaled(x[~small], 4.0)
    return out


def ncx2_unit_pdf(u, K):
    """Density of |h|^2 / E|h|^2 for a Rician channel with factor K."""
    u = np.asarray(u, dtype=np.float64)
    ku = (1.0 + K) * u
    z = 2.0 * np.sqrt(K * ku)
    d = np.sqrt(K) - np.sqrt(ku)
    return (1.0 + K) * np.exp(-d * d) * i0e(z)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod, batched over independent problems
# ---------------------------------------------------------------------------

def _gk21(f, lo, hi, owner):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = f(x, owner)
    k = h * (fx @ KRONROD_W)
    g = h * (fx @ GAUSS_W)
    return k, np.abs(k - g)


def adaptive_batch(f, a, b, atol, rtol, limit):
    """Integrate ``f`` over ``[a[p], b[p]]`` for every problem ``p``.

    ``f(x, owner)`` receives nodes of shape ``(n, 21)`` and the problem index
    of each row.  An interval is accepted once its error estimate is below its
    length-weighted share of ``max(atol, rtol * |coarse estimate|)``.

    Returns ``(values, errors, ok)``; ``ok[p]`` is False when problem ``p``
    needed more than ``limit`` bisections (its value is then NaN).
    """
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    n_prob = a.size
    total = b - a
    values = np.zeros(n_prob)
    errors = np.zeros(n_prob)
    ok = np.ones(n_prob, dtype=bool)
    splits = np.zeros(n_prob, dtype=np.int64)

    live = np.nonzero(total > 0.0)[0]
    if live.size == 0:
        return values, errors, ok
    frac = np.arange(INITIAL_PANELS + 1) / INITIAL_PANELS
    edges = a[live, None] + total[live, None] * frac[None, :]
    lo = edges[:, :-1].ravel()
    hi = edges[:, 1:].ravel()
    owner = np.repeat(live, INITIAL_PANELS)
    k, e = _gk21(f, lo, hi, owner)
    coarse = np.bincount(owner, weights=k, minlength=n_prob)
    tol = np.maximum(atol, rtol * np.abs(coarse))

    while lo.size:
        width = hi - lo
        share = tol[owner] * width / total[owner]
        accept = (e <= share) | (width <= 1e-14 * total[owner])
        bad = ~np.isfinite(k) | ~np.isfinite(e)
        if bad.any():
            ok[owner[bad]] = False
            accept |= bad
        values += np.bincount(owner[accept], weights=k[accept], minlength=n_prob)
        errors += np.bincount(owner[accept], weights=e[accept], minlength=n_prob)
        refine = ~accept
        if not refine.any():
            break
        splits += np.bincount(owner[refine], minlength=n_prob)
        over = splits > limit
        if over.any():
            ok[over] = False
            refine &= ~over[owner]
        lo, hi, owner = lo[refine], hi[refine], owner[refine]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        owner = np.concatenate([owner, owner])
        k, e = _gk21(f, lo, hi, owner)

    values[~ok] = np.nan
    return values, errors, ok


# ---------------------------------------------------------------------------
# Marcum Q_1
# ---------------------------------------------------------------------------

MARCUM_TAIL_SPAN = 40.0


def marcum_q1_pair(a, b, rtol, limit):
    """Return ``(Q1(a, b), 1 - Q1(a, b), ok)`` elementwise.

    The smaller of the two is integrated directly so that deep tails keep
    their relative accuracy.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                               np.asarray(b, dtype=np.float64))
    a = a.ravel()
    b = b.ravel()
    q = np.empty(a.size)
    p = np.empty(a.size)
    ok = np.ones(a.size, dtype=bool)

    zero_b = b == 0.0
    zero_a = (a == 0.0) & ~zero_b
    q[zero_b] = 1.0
    p[zero_b] = 0.0
    q[zero_a] = np.exp(-0.5 * b[zero_a] ** 2)
    p[zero_a] = -np.expm1(-0.5 * b[zero_a] ** 2)

    # below a - span the integrand is under exp(-span^2 / 2)
    far = ~(zero_a | zero_b) & (b <= a - MARCUM_TAIL_SPAN)
    q[far] = 1.0
    p[far] = 0.0

    rest = ~(zero_a | zero_b | far)
    head = rest & (b < a)
    tail = rest & ~head
    idx = np.concatenate([np.nonzero(head)[0], np.nonzero(tail)[0]])
    if idx.size:
        aa = a[idx]
        # integrate over the offset d = t - a so the Gaussian factor carries
        # no cancellation noise when a is large
        c = b[idx] - aa
        lo = np.where(c < 0, np.maximum(-aa, -MARCUM_TAIL_SPAN), c)
        hi = np.where(c < 0, c, c + MARCUM_TAIL_SPAN)

        def integrand(d, own):
            av = aa[own][:, None]
            t = av + d
            return t * np.exp(-0.5 * d * d) * i0e(av * t)

        vals, _, good = adaptive_batch(integrand, lo, hi, 0.0, rtol, limit)
        vals = np.clip(vals, 0.0, 1.0)
        n_head = int(head.sum())
        hidx, tidx = idx[:n_head], idx[n_head:]
        p[hidx] = vals[:n_head]
        q[hidx] = 1.0 - vals[:n_head]
        q[tidx] = vals[n_head:]
        p[tidx] = 1.0 - vals[n_head:]
        ok[idx] = good
    return q, p, ok


# ---------------------------------------------------------------------------
# Average secrecy capacity integrals (unit-mean variables, result in nats)
# ---------------------------------------------------------------------------

def capacity_nested(k_b, k_e, c_b, c_e, ratio, t_u, t_v, atol, rtol, limit):
    """Nested integral of ln((1+c_b u)/(1+c_e v)) f_b(u) f_e(v) over v < ratio*u.

    ``ratio`` maps the user variable onto the eavesdropper variable
    (``ratio * u`` is the eavesdropper value with equal physical power).
    """
    in_atol = 0.1 * atol
    in_rtol = 0.1 * rtol
    failed = [False]

    def outer(u, own):
        flat = u.ravel()
        upper = np.minimum(ratio * flat, t_v)
        cap = np.log1p(c_b * flat)

        def inner(v, iown):
            return (cap[iown][:, None] - np.log1p(c_e * v)) * ncx2_unit_pdf(v, k_e)

        vals, _, good = adaptive_batch(inner, np.zeros_like(upper), upper,
                                       in_atol, in_rtol, limit)
        if not good.all():
            failed[0] = True
            vals = np.where(good, vals, 0.0)
        return (ncx2_unit_pdf(flat, k_b) * vals).reshape(u.shape)

    val, err, good = adaptive_batch(outer, 0.0, t_u, atol, rtol, limit)
    ok = bool(good[0]) and not failed[0]
    return (float(val[0]) if ok else np.nan), float(err[0]), ok


def capacity_single(k_b, c_b, t_u, atol, rtol, limit):
    """Integral of ln(1 + c_b u) f_b(u): the eavesdropper gain is zero."""
    def f(u, own):
        return np.log1p(c_b * u) * ncx2_unit_pdf(u, k_b)

    val, err, good = adaptive_batch(f, 0.0, t_u, atol, rtol, limit)
    return float(val[0]), float(err[0]), bool(good[0])


# ---------------------------------------------------------------------------
# Monte Carlo reductions over pre-drawn standard normals z[4, n]
# ---------------------------------------------------------------------------

def capacity_samples(z, link_b, link_e, gamma):
    """Instantaneous secrecy capacity (bps/Hz) for each column of ``z``.

    ``link_*`` is ``(mean_power, los_re, los_im, nlos_scale)``; the channel
    power is ``mean_power * |los + nlos_scale * (z0 + j z1)|^2``.
    """
    gb, bre, bim, sb = link_b
    ge, ere, eim, se = link_e
    xb = bre + sb * z[0]
    yb = bim + sb * z[1]
    pb = gb * (xb * xb + yb * yb)
    xe = ere + se * z[2]
    ye = eim + se * z[3]
    pe = ge * (xe * xe + ye * ye)
    c = (np.log1p(gamma * pb) - np.log1p(gamma * pe)) / LN2
    return np.maximum(c, 0.0)


def capacity_moments(z, link_b, link_e, gamma):
    c = capacity_samples(z, link_b, link_e, gamma)
    mean = c.mean()
    d = c - mean
    return float(mean), float(d @ d)


def outage_counts(z, link_b, link_e, gamma, thresholds):
    c = capacity_samples(z, link_b, link_e, gamma)
    thresholds = np.asarray(thresholds, dtype=np.float64)
    return np.array([np.count_nonzero(c < r) for r in thresholds], dtype=np.int64)
