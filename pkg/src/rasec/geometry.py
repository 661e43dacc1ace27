"""Boresight geometry of a single rotatable antenna at the origin.

The boresight is restricted to the family ``q_e + alpha * (q_b - q_e)`` with
``alpha >= 1``: ``alpha = 1`` points at the user and ``alpha = alpha_max``
is orthogonal to the eavesdropper.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .errors import AlphaMaxUndefined, DegenerateGeometry, ValidationError

End = Literal["user", "eavesdropper"]

ZERO_NORM = 1e-12
# Cosines this close to zero are snapped to exactly zero so that the
# boresight at alpha_max gives the eavesdropper an exact null.
ORTHO_TOL = 1e-12
COLLINEAR_SIN = 1e-10


def _vec(v) -> np.ndarray:
    arr = np.array(v, dtype=np.float64).reshape(3)
    arr.setflags(write=False)
    return arr


def position(distance: float, elevation_deg: float, azimuth_deg: float = 0.0) -> np.ndarray:
    """Cartesian position from range and angle above the x axis.

    With the default azimuth the point lies in the x-z plane, which is how
    the reference scenario places both terminals.
    """
    el = math.radians(elevation_deg)
    az = math.radians(azimuth_deg)
    return _vec([distance * math.cos(el) * math.cos(az),
                 distance * math.cos(el) * math.sin(az),
                 distance * math.sin(el)])


@dataclass(frozen=True, eq=False)
class Scenario:
    """Full link description.

    Distances are meters, powers dBm, ``zeta_0`` is the linear channel gain
    at 1 m and ``K_b``/``K_e`` are linear Rician factors.
    """
    q_b: np.ndarray
    q_e: np.ndarray
    zeta_0: float = 1e-3
    beta_b: float = 3.0
    beta_e: float = 3.0
    K_b: float = 1.0
    K_e: float = 1.0
    G_0: float = 4.0
    wavelength: float = 0.125
    sigma2_dbm: float = -60.0
    p_dbm: float = 16.0

    def __post_init__(self):
        object.__setattr__(self, "q_b", _vec(self.q_b))
        object.__setattr__(self, "q_e", _vec(self.q_e))
        if not (np.all(np.isfinite(self.q_b)) and np.all(np.isfinite(self.q_e))):
            raise ValidationError("positions must be finite")
        if np.linalg.norm(self.q_b) <= ZERO_NORM:
            raise ValidationError("user position must be nonzero")
        if np.linalg.norm(self.q_e) <= ZERO_NORM:
            raise ValidationError("eavesdropper position must be nonzero")
        for name in ("zeta_0", "G_0", "wavelength"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value}")
        for name in ("beta_b", "beta_e"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive path-loss exponent, got {value}")
        for name in ("K_b", "K_e"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValidationError(f"{name} must be >= 0, got {value}")
        for name in ("sigma2_dbm", "p_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        try:
            g = self.gamma
        except OverflowError:
            g = math.inf
        if not (math.isfinite(g) and g > 0):
            raise ValidationError(f"SNR P/sigma^2 must be finite and positive, got {g}")

    def _key(self):
        return (tuple(self.q_b), tuple(self.q_e), self.zeta_0, self.beta_b, self.beta_e,
                self.K_b, self.K_e, self.G_0, self.wavelength, self.sigma2_dbm, self.p_dbm)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def gamma(self) -> float:
        """Transmit SNR P / sigma^2 (linear)."""
        return 10.0 ** ((self.p_dbm - self.sigma2_dbm) / 10.0)

    def with_power(self, p_dbm: float) -> "Scenario":
        return replace(self, p_dbm=float(p_dbm))


def default_scenario(upsilon_deg: float = 30.0, K: float = 1.0, p_dbm: float = 16.0) -> Scenario:
    """Reference layout: user at 50 m / 60 deg, eavesdropper at 70 m / upsilon."""
    return Scenario(q_b=position(50.0, 60.0), q_e=position(70.0, upsilon_deg),
                    K_b=K, K_e=K, p_dbm=p_dbm)


@dataclass(frozen=True)
class DeflectionAngles:
    theta_z: float  # zenith, [0, pi]
    theta_a: float  # azimuth, (-pi, pi]


@dataclass(frozen=True)
class Boresight:
    alpha: float
    direction: np.ndarray = field(repr=False)
    angles: DeflectionAngles


def deflection_angles(direction) -> DeflectionAngles:
    v = np.asarray(direction, dtype=np.float64)
    n = float(np.linalg.norm(v))
    if n < ZERO_NORM:
        raise DegenerateGeometry("zero boresight vector")
    theta_z = math.acos(min(1.0, max(-1.0, v[2] / n)))
    # atan2 keeps the quadrant that a plain arctan of y/x would lose
    theta_a = math.atan2(v[1], v[0])
    if theta_a == -math.pi:
        theta_a = math.pi
    return DeflectionAngles(theta_z, theta_a)


def direction_from_angles(angles: DeflectionAngles) -> np.ndarray:
    sz = math.sin(angles.theta_z)
    return np.array([sz * math.cos(angles.theta_a),
                     sz * math.sin(angles.theta_a),
                     math.cos(angles.theta_z)])


def boresight_vector(s: Scenario, alpha: float) -> np.ndarray:
    """Unnormalised ``q_e + alpha (q_b - q_e)``."""
    return s.q_e + alpha * (s.q_b - s.q_e)


def boresight_from_alpha(s: Scenario, alpha: float) -> Boresight:
    if not alpha >= 1.0:
        raise ValueError(f"adjustment factor must be >= 1, got {alpha}")
    v = boresight_vector(s, alpha)
    n = float(np.linalg.norm(v))
    if n < ZERO_NORM:
        raise DegenerateGeometry(f"boresight vanishes at alpha={alpha}")
    u = _vec(v / n)
    return Boresight(float(alpha), u, deflection_angles(u))


def alpha_max(s: Scenario) -> float:
    ne2 = float(s.q_e @ s.q_e)
    denom = ne2 - float(s.q_b @ s.q_e)
    if denom <= 0.0:
        raise AlphaMaxUndefined(
            "||q_e||^2 <= q_b.q_e: the boresight line never turns orthogonal "
            "to the eavesdropper")
    return ne2 / denom


def alpha_upper(s: Scenario) -> float:
    """Upper end of the search interval ``[1, max(1, alpha_max)]``.

    ``alpha_max < 1`` means the eavesdropper is behind the antenna for every
    admissible boresight; the interval then collapses to ``alpha = 1``.
    """
    return max(1.0, alpha_max(s))


def cos_epsilon(direction, q) -> float:
    d = np.asarray(direction, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    nd = float(np.linalg.norm(d))
    nq = float(np.linalg.norm(q))
    if nd < ZERO_NORM or nq < ZERO_NORM:
        raise DegenerateGeometry("cosine of a zero vector")
    c = float(d @ q) / (nd * nq)
    if abs(c) <= ORTHO_TOL:
        return 0.0
    return min(1.0, max(-1.0, c))


def effective_gain(direction, q, g0: float) -> float:
    """Cosine antenna pattern, zero outside the front half-space."""
    return g0 * max(cos_epsilon(direction, q), 0.0)


def _end_vector(s: Scenario, end: str) -> np.ndarray:
    if end in ("user", "b"):
        return s.q_b
    if end in ("eavesdropper", "e"):
        return s.q_e
    raise ValueError(f"end must be 'user' or 'eavesdropper', got {end!r}")


def phi_inv(s: Scenario, alpha, end: End):
    """Cosine between the alpha-boresight and the terminal direction.

    Accepts scalar or array ``alpha``.
    """
    q = _end_vector(s, end)
    a = np.asarray(alpha, dtype=np.float64)
    if np.any(a < 1.0):
        raise ValueError("adjustment factor must be >= 1")
    qbar = s.q_b - s.q_e
    # |q_e + a qbar|^2 = d2 a^2 + 2 d1 a + d0
    d0 = float(s.q_e @ s.q_e)
    d1 = float(qbar @ s.q_e)
    d2 = float(qbar @ qbar)
    norm2 = d2 * a * a + 2.0 * d1 * a + d0
    if np.any(norm2 < ZERO_NORM ** 2):
        raise DegenerateGeometry("boresight vanishes on the requested alpha")
    c = (float(s.q_e @ q) + a * float(qbar @ q)) / (np.sqrt(norm2) * np.linalg.norm(q))
    c = np.where(np.abs(c) <= ORTHO_TOL, 0.0, np.clip(c, -1.0, 1.0))
    return float(c) if c.ndim == 0 else c


def psi(s: Scenario, alpha):
    """Ratio of user to eavesdropper cosines (``Phi_e / Phi_b``)."""
    return phi_inv(s, alpha, "user") / phi_inv(s, alpha, "eavesdropper")


def cos_bae(s: Scenario) -> float:
    nb = float(np.linalg.norm(s.q_b))
    ne = float(np.linalg.norm(s.q_e))
    return min(1.0, max(-1.0, float(s.q_b @ s.q_e) / (nb * ne)))


def sin_bae(s: Scenario) -> float:
    nb = float(np.linalg.norm(s.q_b))
    ne = float(np.linalg.norm(s.q_e))
    return float(np.linalg.norm(np.cross(s.q_b, s.q_e))) / (nb * ne)


def angle_bae(s: Scenario) -> float:
    """Angle at the antenna between the user and eavesdropper, in [0, pi]."""
    return math.atan2(sin_bae(s), cos_bae(s))


def is_collinear(s: Scenario) -> bool:
    return sin_bae(s) < COLLINEAR_SIN and cos_bae(s) > 0.0


def scenario_warnings(s: Scenario) -> list[str]:
    """Non-fatal remarks about a scenario; raises when alpha_max is undefined."""
    notes = []
    amax = alpha_max(s)
    if cos_bae(s) < 0.0:
        notes.append("eavesdropper is behind the antenna for every alpha >= 1 "
                     f"(alpha_max={amax:.6g} < 1); its gain is clamped to 0")
    if is_collinear(s):
        notes.append("user and eavesdropper are collinear with the antenna")
    return notes
