"""Average secrecy capacity: Monte Carlo, nested quadrature and the line search."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from . import kernels
from .channel import link_coefficients, mean_channel_power, large_scale, unit_tail_point
from .errors import NonConvergent
from .geometry import Scenario, alpha_upper, cos_epsilon, is_collinear
from .specfun import QuadratureSpec

LN2 = math.log(2.0)
# Monte Carlo draws are generated in fixed-size blocks, each from its own
# child of SeedSequence(seed), so results do not depend on how work is split.
MC_BLOCK = 1 << 18
DEFAULT_TOL_ALPHA = 1e-4
PLATEAU_TOL = 1e-9


@dataclass(frozen=True)
class CapacityEstimate:
    value: float                                  # bps/Hz
    method: Literal["monte_carlo", "quadrature"]
    std_error: float = 0.0                        # MC only
    samples_or_tol: float = 0.0                   # sample count or rtol
    error_estimate: float = 0.0                   # quadrature error bound, bps/Hz


@dataclass(frozen=True)
class OptResult:
    alpha_opt: float
    value: CapacityEstimate
    iterations: int
    bracket_width: float
    evaluations: int = 0


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def normal_blocks(n: int, seed: int, block: int = MC_BLOCK):
    """Yield ``(4, m)`` arrays of standard normals totalling ``n`` columns."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    nblocks = -(-n // block)
    children = np.random.SeedSequence(int(seed)).spawn(nblocks)
    for i, child in enumerate(children):
        m = min(block, n - i * block)
        yield np.random.Generator(np.random.PCG64(child)).standard_normal((4, m))


def _links(s: Scenario, alpha: float):
    return link_coefficients(s, alpha, "user"), link_coefficients(s, alpha, "eavesdropper")


def avg_cs_mc(s: Scenario, alpha: float, n: int = 1_000_000, seed: int = 0,
              block: int = MC_BLOCK) -> CapacityEstimate:
    """Sample mean of the instantaneous secrecy capacity over ``n`` joint draws."""
    link_b, link_e = _links(s, alpha)
    gamma = s.gamma
    count, mean, m2 = 0, 0.0, 0.0
    for z in normal_blocks(n, seed, block):
        k = z.shape[1]
        bmean, bm2 = kernels.capacity_moments(z, link_b, link_e, gamma)
        # pairwise merge of running moments
        delta = bmean - mean
        total = count + k
        mean += delta * k / total
        m2 += bm2 + delta * delta * count * k / total
        count = total
    var = m2 / (count - 1) if count > 1 else 0.0
    return CapacityEstimate(max(mean, 0.0), "monte_carlo", math.sqrt(max(var, 0.0) / count),
                            float(count))


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def _avg_cs_from_means(s: Scenario, m_b: float, m_e: float,
                       spec: QuadratureSpec) -> CapacityEstimate:
    gamma = s.gamma
    if m_b <= 0.0:
        # no user gain: C_b = 0 so the positive part vanishes pathwise
        return CapacityEstimate(0.0, "quadrature", samples_or_tol=spec.rtol)
    atol = spec.atol * LN2
    t_u = unit_tail_point(float(s.K_b), spec.tail_eps)
    if m_e <= 0.0:
        val, err, ok = kernels.capacity_single(s.K_b, gamma * m_b, t_u, atol, spec.rtol,
                                               spec.limit)
    else:
        t_v = unit_tail_point(float(s.K_e), spec.tail_eps)
        val, err, ok = kernels.capacity_nested(s.K_b, s.K_e, gamma * m_b, gamma * m_e,
                                               m_b / m_e, t_u, t_v, atol, spec.rtol,
                                               spec.limit)
    if not ok:
        raise NonConvergent("average secrecy capacity quadrature exceeded its budget")
    return CapacityEstimate(max(val / LN2, 0.0), "quadrature", samples_or_tol=spec.rtol,
                            error_estimate=err / LN2)


def avg_cs_quad(s: Scenario, alpha: float, spec: QuadratureSpec | None = None) -> CapacityEstimate:
    """Deterministic nested-integral value of ``E[C_s(alpha)]``.

    A zero eavesdropper gain collapses its law to a point mass at 0 and the
    nested integral reduces to a single integral over the user density.
    """
    spec = spec or QuadratureSpec()
    return _avg_cs_from_means(s, float(mean_channel_power(s, alpha, "user")),
                              float(mean_channel_power(s, alpha, "eavesdropper")), spec)


def avg_cs_direction(s: Scenario, direction, spec: QuadratureSpec | None = None) -> CapacityEstimate:
    """``E[C_s]`` for an arbitrary boresight direction (not restricted to the line family)."""
    spec = spec or QuadratureSpec()
    m_b = large_scale(s, "user") * s.G_0 * max(cos_epsilon(direction, s.q_b), 0.0)
    m_e = large_scale(s, "eavesdropper") * s.G_0 * max(cos_epsilon(direction, s.q_e), 0.0)
    return _avg_cs_from_means(s, m_b, m_e, spec)


# ---------------------------------------------------------------------------
# Line search
# ---------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LineSearch:
    x: float
    fx: float
    iterations: int
    bracket_width: float
    evaluations: int


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float) -> LineSearch:
    """Maximise a unimodal ``f`` on ``[lo, hi]`` to bracket width ``tol``.

    The two endpoints are evaluated too, so a maximum sitting exactly on the
    boundary is returned as the boundary point itself.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    cache: dict[float, float] = {}

    def ev(x):
        if x not in cache:
            cache[x] = float(f(x))
        return cache[x]

    a, b = float(lo), float(hi)
    it = 0
    if b - a > tol:
        c = b - _INV_PHI * (b - a)
        d = a + _INV_PHI * (b - a)
        fc, fd = ev(c), ev(d)
        while b - a > tol:
            it += 1
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _INV_PHI * (b - a)
                fc = ev(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INV_PHI * (b - a)
                fd = ev(d)
    mid = 0.5 * (a + b)
    candidates = [float(lo), float(hi), mid] + [x for x in cache if a <= x <= b]
    best = max(candidates, key=lambda x: (ev(x), -abs(x - mid)))
    return LineSearch(best, ev(best), it, b - a, len(cache))


def optimize_alpha(s: Scenario, tol_alpha: float = DEFAULT_TOL_ALPHA,
                   spec: QuadratureSpec | None = None) -> OptResult:
    """Golden-section maximisation of the quadrature objective over ``[1, alpha_max]``."""
    spec = spec or QuadratureSpec()
    if not tol_alpha > 0:
        raise ValueError("tol_alpha must be positive")
    if is_collinear(s):
        # every boresight on the line is the same ray; alpha = 1 is as good as any
        return OptResult(1.0, avg_cs_quad(s, 1.0, spec), 0, 0.0, 1)
    hi = alpha_upper(s)
    res = golden_section_max(lambda a: avg_cs_quad(s, a, spec).value, 1.0, hi, tol_alpha)
    return OptResult(res.x, avg_cs_quad(s, res.x, spec), res.iterations, res.bracket_width,
                     res.evaluations)


def alpha_grid(s: Scenario, n: int = 64) -> np.ndarray:
    return np.linspace(1.0, alpha_upper(s), n)


def is_unimodal(values, plateau: float = PLATEAU_TOL) -> bool:
    """True when the sequence rises then falls (either part may be empty).

    First differences within ``plateau`` of zero are ignored; after that the
    signs may change from + to - at most once.
    """
    d = np.diff(np.asarray(values, dtype=np.float64))
    signs = np.sign(d[np.abs(d) > plateau])
    if signs.size == 0:
        return True
    changes = np.nonzero(np.diff(signs))[0]
    if changes.size == 0:
        return True
    return changes.size == 1 and signs[0] > 0
