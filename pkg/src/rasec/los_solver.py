"""Closed-form boresight for the LoS-only secrecy capacity.

With only line-of-sight components the secrecy capacity along the boresight
family is a deterministic function of alpha.  Its stationarity condition
reduces (after squaring) to a quadratic in alpha, and the case tree below
picks the maximiser from the signs of that quadratic's coefficients, its
discriminant and the SNR threshold ``gamma0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import large_scale, mean_channel_power
from .errors import CollinearGeometry
from .geometry import COLLINEAR_SIN, Scenario, alpha_max, cos_bae, sin_bae

GAMMA0_RTOL = 1e-10
ZETA2_RTOL = 1e-12
TANGENT_RTOL = 1e-12
ROOT_RTOL = 1e-8


class Branch(enum.Enum):
    COLLINEAR_USER_FIRST = "CollinearUserFirst"
    COLLINEAR_ZERO_CAPACITY = "CollinearZeroCapacity"
    EAVESDROPPER_BEHIND = "EavesdropperBehind"
    EAVESDROPPER_STRONGER_BOUNDARY = "EavesdropperStrongerBoundary"
    HIGH_SNR_BOUNDARY = "HighSnrBoundary"
    TANGENT_BOUNDARY = "TangentBoundary"
    TANGENT_INTERIOR = "TangentInterior"
    QUADRATIC_INTERIOR = "QuadraticInterior"
    LINEAR_INTERIOR = "LinearInterior"
    NO_INTERIOR_ROOT_BOUNDARY = "NoInteriorRootBoundary"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LosCoefficients:
    r_b0: float
    r_b1: float
    r_e0: float
    r_e1: float
    d0: float
    d1: float
    d2: float
    rho_b0: float
    rho_b1: float
    rho_e0: float
    rho_e1: float
    w: float
    kappa: float
    zeta0: float
    zeta1: float
    zeta2: float
    alpha_tilde: float
    alpha_star: float
    discriminant: float

    def s(self, alpha):
        """Boresight norm ``sqrt(d2 a^2 + 2 d1 a + d0)``."""
        a = np.asarray(alpha, dtype=np.float64)
        return np.sqrt(self.d2 * a * a + 2.0 * self.d1 * a + self.d0)

    def identity_residuals(self) -> tuple[float, float, float, float]:
        """Relative residuals of the four identities that collapse the
        stationarity condition to a single square-root equation."""
        base = self.r_e1 * self.r_b0 - self.r_b1 * self.r_e0
        pairs = [
            (self.r_b1 * self.rho_e1 - self.r_e1 * self.rho_b1, self.d2 * base),
            (self.r_b1 * self.rho_e0 - self.r_e1 * self.rho_b0, self.d1 * base),
            (self.r_b0 * self.rho_e1 - self.r_e0 * self.rho_b1, self.d1 * base),
            (self.r_b0 * self.rho_e0 - self.r_e0 * self.rho_b0, self.d0 * base),
        ]
        out = []
        for lhs, rhs in pairs:
            # scale by the magnitude of the individual products, which is what
            # rounding error is proportional to
            scale = max(abs(lhs), abs(rhs), abs(base) * max(self.d0, abs(self.d1), self.d2),
                        1e-300)
            out.append(abs(lhs - rhs) / scale)
        return tuple(out)


@dataclass(frozen=True)
class LosSolution:
    branch: Branch
    alpha_opt: float
    gamma0: float | None
    capacity: float
    alpha_max: float
    clamped: bool = False
    root_residual: float | None = None


def cs_los(s: Scenario, alpha):
    """LoS-only secrecy capacity in bps/Hz (scalar or array ``alpha``)."""
    g = s.gamma
    mb = mean_channel_power(s, alpha, "user")
    me = mean_channel_power(s, alpha, "eavesdropper")
    c = np.maximum((np.log1p(g * mb) - np.log1p(g * me)) / math.log(2.0), 0.0)
    return float(c) if np.ndim(c) == 0 else c


def _norms(s: Scenario):
    return float(np.linalg.norm(s.q_b)), float(np.linalg.norm(s.q_e))


def _v_norm2(s: Scenario) -> float:
    lb, le = large_scale(s, "user"), large_scale(s, "eavesdropper")
    nb, ne = _norms(s)
    v = lb * nb * s.q_e - le * ne * s.q_b
    return float(v @ v)


def compute_coefficients(s: Scenario) -> LosCoefficients:
    g, g0 = s.gamma, s.G_0
    lb, le = large_scale(s, "user"), large_scale(s, "eavesdropper")
    nb, ne = _norms(s)
    qbar = s.q_b - s.q_e
    r_b0 = g * lb * g0 / nb * float(s.q_e @ s.q_b)
    r_b1 = g * lb * g0 / nb * float(qbar @ s.q_b)
    r_e0 = g * le * g0 / ne * float(s.q_e @ s.q_e)
    r_e1 = g * le * g0 / ne * float(qbar @ s.q_e)
    d0 = float(s.q_e @ s.q_e)
    d1 = float(qbar @ s.q_e)
    d2 = float(qbar @ qbar)
    rho_b0 = r_b1 * d0 - r_b0 * d1
    rho_b1 = r_b1 * d1 - r_b0 * d2
    rho_e0 = r_e1 * d0 - r_e0 * d1
    rho_e1 = r_e1 * d1 - r_e0 * d2
    bte = float(s.q_b @ s.q_e)
    # Lagrange's identity keeps w exactly <= 0 where the naive difference of
    # squares can round to a tiny positive number
    w = min(bte * bte - nb * nb * ne * ne, -float(np.sum(np.cross(s.q_b, s.q_e) ** 2)))
    if sin_bae(s) < COLLINEAR_SIN:
        w = 0.0
    kappa = (g * lb * le * g0) ** 2
    zeta2 = (lb * ne - le * nb) ** 2 - kappa * d2
    zeta1 = -2.0 * lb * lb * ne * ne + 2.0 * lb * le * nb * ne - 2.0 * kappa * d1
    zeta0 = (lb * lb - kappa) * ne * ne
    # discriminant via its factored form, which avoids cancellation
    disc = 4.0 * kappa * kappa * w + 4.0 * kappa * _v_norm2(s)
    denom = lb * ne - le * nb
    alpha_tilde = math.inf if denom == 0.0 else lb * ne / denom
    alpha_star = -d1 / d2 if d2 > 0 else math.inf
    return LosCoefficients(r_b0, r_b1, r_e0, r_e1, d0, d1, d2, rho_b0, rho_b1, rho_e0, rho_e1,
                           w, kappa, zeta0, zeta1, zeta2, alpha_tilde, alpha_star, disc)


def gamma0(s: Scenario) -> float:
    """SNR (linear) above which the LoS optimum sits at ``alpha_max``."""
    if sin_bae(s) < COLLINEAR_SIN:
        raise CollinearGeometry("gamma0 is undefined when user and eavesdropper are collinear")
    lb, le = large_scale(s, "user"), large_scale(s, "eavesdropper")
    w = -float(np.sum(np.cross(s.q_b, s.q_e) ** 2))
    return math.sqrt(_v_norm2(s)) / (lb * le * s.G_0 * math.sqrt(-w))


def upsilon(s: Scenario, alpha):
    """The two sides of the unsquared stationarity equation, ``(affine, sqrt)``."""
    lb, le = large_scale(s, "user"), large_scale(s, "eavesdropper")
    nb, ne = _norms(s)
    a = np.asarray(alpha, dtype=np.float64)
    qbar = s.q_b - s.q_e
    root = np.sqrt(float(qbar @ qbar) * a * a + 2.0 * float(qbar @ s.q_e) * a
                   + float(s.q_e @ s.q_e))
    left = (lb / nb - le / ne) * a - lb / nb
    right = s.gamma * lb * le * s.G_0 / (nb * ne) * root
    return left, right


def _root_residual(s: Scenario, alpha: float) -> float:
    left, right = upsilon(s, alpha)
    return float(abs(left - right) / max(abs(left), abs(right), 1e-300))


def _quadratic_root(c: LosCoefficients) -> float:
    """``(-zeta1 + sqrt(D)) / (2 zeta2)`` in a cancellation-free form."""
    sq = math.sqrt(max(c.discriminant, 0.0))
    if c.zeta1 > 0.0:
        return 2.0 * c.zeta0 / (-c.zeta1 - sq)
    return (-c.zeta1 + sq) / (2.0 * c.zeta2)


def solve_near_optimal(s: Scenario) -> LosSolution:
    """Closed-form maximiser of :func:`cs_los` over ``[1, alpha_max]``."""
    amax = alpha_max(s)
    lb, le = large_scale(s, "user"), large_scale(s, "eavesdropper")
    nb, ne = _norms(s)

    def done(branch, alpha, g0=None, clamped=False, residual=None):
        return LosSolution(branch, float(alpha), g0, cs_los(s, alpha), amax, clamped, residual)

    if sin_bae(s) < COLLINEAR_SIN and cos_bae(s) > 0.0:
        if lb > le:
            return done(Branch.COLLINEAR_USER_FIRST, 1.0)
        return done(Branch.COLLINEAR_ZERO_CAPACITY, 1.0)
    if amax <= 1.0:
        # the eavesdropper is behind (or beside) the antenna already at alpha=1
        return done(Branch.EAVESDROPPER_BEHIND, 1.0)
    if lb / nb < le / ne:
        return done(Branch.EAVESDROPPER_STRONGER_BOUNDARY, amax)

    g0 = gamma0(s)
    g = s.gamma
    if abs(g - g0) <= GAMMA0_RTOL * g0:
        return done(Branch.TANGENT_BOUNDARY, amax, g0)
    if g > g0:
        return done(Branch.HIGH_SNR_BOUNDARY, amax, g0)

    c = compute_coefficients(s)

    def interior(branch, alpha, check=True):
        clamped = not (1.0 <= alpha <= amax)
        a = min(max(alpha, 1.0), amax)
        return done(branch, a, g0, clamped, _root_residual(s, alpha) if check else None)

    if c.discriminant <= TANGENT_RTOL * c.zeta1 * c.zeta1:
        # both sides of the unsquared equation vanish at alpha_tilde in this
        # limit, so a relative residual carries no information
        return interior(Branch.TANGENT_INTERIOR, c.alpha_tilde, check=False)
    zeta2_zero = abs(c.zeta2) < ZETA2_RTOL * max(abs(c.zeta0), abs(c.zeta1))
    if zeta2_zero:
        if c.alpha_tilde < c.alpha_star:
            return interior(Branch.LINEAR_INTERIOR, c.zeta0 / -c.zeta1)
        return done(Branch.NO_INTERIOR_ROOT_BOUNDARY, amax, g0)
    if c.zeta2 > 0.0 or c.alpha_tilde < c.alpha_star:
        return interior(Branch.QUADRATIC_INTERIOR, _quadratic_root(c))
    return done(Branch.NO_INTERIOR_ROOT_BOUNDARY, amax, g0)
