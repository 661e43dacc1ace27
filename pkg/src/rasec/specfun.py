"""Special functions and quadrature primitives.

Bessel I0/I1 use the power series below x = 15 and the large-argument
expansion above; the Marcum Q-function is evaluated from its defining
integral with adaptive Gauss-Kronrod, plus the closed forms at a = 0 and
b = 0.  The numeric work happens in :mod:`rasec.kernels`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NonConvergent

__all__ = [
    "QuadratureSpec", "bessel_i0", "bessel_i1", "bessel_i0e", "bessel_i1e",
    "log_bessel_i0", "log_bessel_i1", "marcum_q1", "marcum_q1_complement",
    "integrate", "integrate_semi_infinite",
]

MARCUM_RTOL = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive integration.

    ``limit`` caps the number of interval bisections per integral and
    ``tail_eps`` is the probability mass allowed beyond the truncation point
    of a semi-infinite domain.
    """
    atol: float = 1e-8
    rtol: float = 1e-8
    limit: int = 200
    tail_eps: float = 1e-10

    def __post_init__(self):
        if not (self.atol > 0 and self.rtol > 0 and self.tail_eps > 0):
            raise ValueError("quadrature tolerances must be positive")
        if int(self.limit) < 1:
            raise ValueError("limit must be >= 1")


def _scalar_or_array(out, x):
    return float(out) if np.ndim(x) == 0 else out


def bessel_i0e(x):
    """``exp(-x) I0(x)`` for ``x >= 0``."""
    return _scalar_or_array(kernels.i0e(x), x)


def bessel_i1e(x):
    return _scalar_or_array(kernels.i1e(x), x)


def bessel_i0(x):
    xa = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore"):
        out = kernels.i0e(xa) * np.exp(xa)
    return _scalar_or_array(out, x)


def bessel_i1(x):
    xa = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore"):
        out = kernels.i1e(xa) * np.exp(xa)
    return _scalar_or_array(out, x)


def log_bessel_i0(x):
    xa = np.asarray(x, dtype=np.float64)
    return _scalar_or_array(xa + np.log(kernels.i0e(xa)), x)


def log_bessel_i1(x):
    xa = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = xa + np.log(kernels.i1e(xa))
    return _scalar_or_array(out, x)


def _marcum(a, b):
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    if np.any(a_arr < 0) or np.any(b_arr < 0):
        raise ValueError("Marcum Q arguments must be nonnegative")
    q, p, ok = kernels.marcum_q1_pair(a_arr, b_arr, MARCUM_RTOL)
    if not np.all(ok):
        raise NonConvergent("Marcum Q integral did not converge")
    return q, p


def marcum_q1(a, b):
    """First-order Marcum Q-function ``Q1(a, b)``."""
    q, _ = _marcum(a, b)
    return _scalar_or_array(q, np.broadcast(a, b))


def marcum_q1_complement(a, b):
    """``1 - Q1(a, b)``, computed directly when it is the small side."""
    _, p = _marcum(a, b)
    return _scalar_or_array(p, np.broadcast(a, b))


def _vectorised(f):
    def g(x, owner):
        try:
            out = np.asarray(f(x), dtype=np.float64)
        except (TypeError, ValueError):
            out = None
        if out is None or out.shape != x.shape:
            out = np.vectorize(f, otypes=[np.float64])(x)
        return out
    return g


def integrate(f, a: float, b: float, spec: QuadratureSpec | None = None) -> float:
    """Adaptive 21-point Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    ``f`` should accept numpy arrays; scalar-only callables are vectorised.
    """
    spec = spec or QuadratureSpec()
    if b < a:
        return -integrate(f, b, a, spec)
    val, _, ok = kernels.vec.adaptive_batch(_vectorised(f), a, b, spec.atol, spec.rtol,
                                            spec.limit)
    if not ok[0]:
        raise NonConvergent(f"integral over [{a}, {b}] exceeded {spec.limit} subdivisions")
    return float(val[0])


_PROBE_STEPS = 400
_STRETCH = 12


def truncation_point(f, a: float = 0.0, scale: float = 1.0, cutoff: float = 1e-13) -> float:
    """First probe point after which ``|f|`` stays below ``cutoff * peak``.

    Probes sit at ``a + scale * (2**(j/4) - 1)``; the integrand has to stay
    below the threshold for ``_STRETCH`` consecutive probes (a factor of 8 in
    distance) before the domain is cut.
    """
    j = np.arange(1, _PROBE_STEPS + 1)
    xs = a + scale * (2.0 ** (j / 4.0) - 1.0)
    with np.errstate(all="ignore"):
        vals = np.abs(np.asarray(_vectorised(f)(xs, None), dtype=np.float64))
    vals = np.where(np.isfinite(vals), vals, np.inf)
    peak = 0.0
    run = 0
    for i, v in enumerate(vals):
        if np.isfinite(v):
            peak = max(peak, v)
        if peak > 0 and v <= cutoff * peak:
            run += 1
            if run == _STRETCH:
                return float(xs[i - _STRETCH + 1])
        else:
            run = 0
    raise NonConvergent("integrand does not decay on the probed range")


def integrate_semi_infinite(f, spec: QuadratureSpec | None = None, a: float = 0.0,
                            scale: float = 1.0) -> float:
    """Integral of a decaying ``f`` over ``[a, inf)``."""
    spec = spec or QuadratureSpec()
    cutoff = 1e-3 * min(spec.tail_eps, spec.atol, spec.rtol)
    upper = truncation_point(f, a, scale, cutoff)
    return integrate(f, a, upper, spec)
