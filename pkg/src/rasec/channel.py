"""Rician channel model: large-scale gain, fading draws and power densities."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DegenerateDensity
from .geometry import End, Scenario, _end_vector, phi_inv
from .specfun import marcum_q1, marcum_q1_complement


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def snr_linear(p_dbm: float, sigma2_dbm: float) -> float:
    # the 1e-3 factors of both dBm conversions cancel
    return dbm_to_watts(p_dbm) / dbm_to_watts(sigma2_dbm)


@dataclass(frozen=True)
class FadingParams:
    L: float          # large-scale gain
    K: float          # Rician factor
    eta: float        # (1 + K) / (L G_0)
    los_phase: float  # -2 pi ||q|| / lambda, radians


@dataclass(frozen=True)
class ChannelSample:
    power_b: np.ndarray
    power_e: np.ndarray


def _is_user(end: str) -> bool:
    if end in ("user", "b"):
        return True
    if end in ("eavesdropper", "e"):
        return False
    raise ValueError(f"end must be 'user' or 'eavesdropper', got {end!r}")


def large_scale(s: Scenario, end: End) -> float:
    q = _end_vector(s, end)
    beta = s.beta_b if _is_user(end) else s.beta_e
    return s.zeta_0 * float(np.linalg.norm(q)) ** (-beta)


def fading_params(s: Scenario, end: End) -> FadingParams:
    L = large_scale(s, end)
    K = s.K_b if _is_user(end) else s.K_e
    dist = float(np.linalg.norm(_end_vector(s, end)))
    return FadingParams(L=L, K=K, eta=(1.0 + K) / (L * s.G_0),
                        los_phase=-2.0 * math.pi * dist / s.wavelength)


def mean_channel_power(s: Scenario, alpha, end: End):
    """``E|h|^2 = L G_0 cos(eps)`` (zero when the terminal is behind the antenna)."""
    c = phi_inv(s, alpha, end)
    return large_scale(s, end) * s.G_0 * np.maximum(c, 0.0)


def link_coefficients(s: Scenario, alpha: float, end: End, los_phase: float | None = None):
    """``(mean_power, los_re, los_im, nlos_scale)`` as consumed by the MC kernels.

    The channel power is ``mean_power * |los + nlos_scale (z0 + j z1)|^2`` for
    independent standard normals ``z0, z1``; ``nlos_scale`` carries the 1/2
    variance split of the circular Gaussian.
    """
    fp = fading_params(s, end)
    phase = fp.los_phase if los_phase is None else los_phase
    amp = math.sqrt(fp.K / (fp.K + 1.0))
    return (float(mean_channel_power(s, alpha, end)),
            amp * math.cos(phase), amp * math.sin(phase),
            math.sqrt(0.5 / (fp.K + 1.0)))


def _power_from_normals(link, z0, z1):
    g, re, im, sc = link
    x = re + sc * z0
    y = im + sc * z1
    return g * (x * x + y * y)


def sample_channel_power(rng: np.random.Generator, s: Scenario, alpha: float, end: End,
                         size: int | None = None, los_phase: float | None = None):
    """Draw ``|h_i|^2``; returns a float when ``size`` is None."""
    link = link_coefficients(s, alpha, end, los_phase)
    n = 1 if size is None else int(size)
    z = rng.standard_normal((2, n))
    p = _power_from_normals(link, z[0], z[1])
    return float(p[0]) if size is None else p


def sample_channel(rng: np.random.Generator, s: Scenario, alpha: float, n: int) -> ChannelSample:
    """Joint draw of both links, using the same normal layout as the MC kernels."""
    z = rng.standard_normal((4, int(n)))
    pb = _power_from_normals(link_coefficients(s, alpha, "user"), z[0], z[1])
    pe = _power_from_normals(link_coefficients(s, alpha, "eavesdropper"), z[2], z[3])
    return ChannelSample(pb, pe)


def _density_scale(s: Scenario, alpha: float, end: End) -> tuple[float, float]:
    m = float(mean_channel_power(s, alpha, end))
    if m <= 0.0:
        raise DegenerateDensity(
            f"{end} gain is zero at alpha={alpha}: |h|^2 is a point mass at 0")
    return m, fading_params(s, end).K


def pdf_channel_power(x, s: Scenario, alpha: float, end: End):
    """Noncentral chi-square (2 dof) density of ``|h_i|^2``."""
    m, K = _density_scale(s, alpha, end)
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 0):
        raise ValueError("channel power must be nonnegative")
    out = kernels.ncx2_unit_pdf(xa / m, K) / m
    return float(out) if xa.ndim == 0 else out


def cdf_channel_power(x, s: Scenario, alpha: float, end: End):
    m, K = _density_scale(s, alpha, end)
    b = np.sqrt(2.0 * (1.0 + K) * np.asarray(x, dtype=np.float64) / m)
    return marcum_q1_complement(math.sqrt(2.0 * K), b)


def instant_secrecy_capacity(pb, pe, gamma: float):
    """``[log2(1 + gamma pb) - log2(1 + gamma pe)]^+`` in bps/Hz."""
    pb = np.asarray(pb, dtype=np.float64)
    pe = np.asarray(pe, dtype=np.float64)
    c = np.maximum((np.log1p(gamma * pb) - np.log1p(gamma * pe)) / math.log(2.0), 0.0)
    return float(c) if c.ndim == 0 else c


@lru_cache(maxsize=256)
def unit_tail_point(K: float, eps: float) -> float:
    """``T`` with ``Pr(U > T) ~= eps`` for the unit-mean Rician power ``U``.

    Solved by bisection on log T; the result errs on the large side.
    """
    a = math.sqrt(2.0 * K)

    def tail(t):
        return marcum_q1(a, math.sqrt(2.0 * (1.0 + K) * t))

    lo, hi = 1.0, 2.0
    while tail(hi) > eps:
        lo, hi = hi, 2.0 * hi
    for _ in range(40):
        mid = math.sqrt(lo * hi)
        if tail(mid) > eps:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-6:
            break
    return hi
