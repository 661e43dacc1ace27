"""Secrecy outage probability: high-SNR closed form and Monte Carlo estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .avg_secrecy import MC_BLOCK, normal_blocks
from .channel import large_scale, link_coefficients
from .errors import CollinearGeometry
from .geometry import COLLINEAR_SIN, Scenario, sin_bae
from .specfun import marcum_q1_complement

Z95 = 1.959963984540054


@dataclass(frozen=True)
class SopPoint:
    r_s: float
    p_dbm: float
    sop_theory: float | None
    sop_mc: float
    ci95_halfwidth: float
    ci_center: float
    samples: int

    @property
    def ci_low(self) -> float:
        return max(0.0, self.ci_center - self.ci95_halfwidth)

    @property
    def ci_high(self) -> float:
        return min(1.0, self.ci_center + self.ci95_halfwidth)

    def contains(self, p: float) -> bool:
        return self.ci_low <= p <= self.ci_high


def gamma_th(r_s: float, gamma: float) -> float:
    """Channel-power threshold ``(2^r_s - 1) / gamma`` below which C_b < r_s."""
    if r_s < 0 or not gamma > 0:
        raise ValueError("need r_s >= 0 and gamma > 0")
    return math.expm1(r_s * math.log(2.0)) / gamma


def sop_theory(s: Scenario, r_s) -> float:
    """High-SNR outage probability with the boresight orthogonal to the eavesdropper.

    The eavesdropper gain is zero, so the outage is the CDF of the user's
    Rician power at ``gamma_th``; its mean is ``L_b G_0 sin(BAE)``.  The
    first Marcum argument is ``sqrt(2 K_b)``, the noncentrality of the
    unit-mean Rician power used throughout the channel model.
    """
    sin_a = sin_bae(s)
    if sin_a <= COLLINEAR_SIN:
        raise CollinearGeometry("outage formula needs a nonzero angle between the terminals")
    mean_power = large_scale(s, "user") * s.G_0 * sin_a
    k = s.K_b
    rs = np.asarray(r_s, dtype=np.float64)
    if np.any(rs < 0):
        raise ValueError("target rate must be >= 0")
    thr = np.expm1(rs * math.log(2.0)) / s.gamma
    b = np.sqrt(2.0 * (1.0 + k) * thr / mean_power)
    out = np.clip(marcum_q1_complement(math.sqrt(2.0 * k), b), 0.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def wilson(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    """Center and half-width of the Wilson score interval for ``k`` of ``n``."""
    p = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    return center, half


def sop_mc_many(s: Scenario, alpha: float, r_s_values, n: int = 10_000_000, seed: int = 0,
                with_theory: bool = True, block: int = MC_BLOCK) -> list[SopPoint]:
    """Outage fractions ``Pr(C_s < r_s)`` for several rates from one set of draws."""
    rates = np.atleast_1d(np.asarray(r_s_values, dtype=np.float64))
    if np.any(rates < 0):
        raise ValueError("target rates must be >= 0")
    link_b = link_coefficients(s, alpha, "user")
    link_e = link_coefficients(s, alpha, "eavesdropper")
    counts = np.zeros(rates.size, dtype=np.int64)
    total = 0
    for z in normal_blocks(n, seed, block):
        counts += kernels.outage_counts(z, link_b, link_e, s.gamma, rates)
        total += z.shape[1]
    points = []
    for r, k in zip(rates, counts):
        theory = None
        if with_theory and sin_bae(s) > COLLINEAR_SIN:
            theory = sop_theory(s, float(r))
        center, half = wilson(int(k), total)
        points.append(SopPoint(float(r), s.p_dbm, theory, int(k) / total, half, center, total))
    return points


def sop_mc(s: Scenario, alpha: float, r_s: float, n: int = 10_000_000, seed: int = 0) -> SopPoint:
    """Monte Carlo outage probability at one rate (both links fading)."""
    return sop_mc_many(s, alpha, [r_s], n, seed)[0]
