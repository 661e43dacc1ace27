"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is picked at import time (numba unless ``RASEC_DISABLE_NUMBA=1``)
and can be switched at runtime with :func:`set_backend` or the
:func:`use_backend` context manager, which the tests and the benchmark use to
run both paths side by side.
"""
from contextlib import contextmanager

import numpy as np

from . import vec
from ._backend import ENV_FLAG, HAVE_NUMBA, default_backend

__all__ = [
    "ENV_FLAG", "backend", "set_backend", "use_backend",
    "i0e", "i1e", "ncx2_unit_pdf", "marcum_q1_pair",
    "capacity_nested", "capacity_single",
    "capacity_samples", "capacity_moments", "outage_counts",
]

_state = {"name": default_backend()}


def backend() -> str:
    return _state["name"]


def set_backend(name: str) -> None:
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _state["name"] = name


@contextmanager
def use_backend(name: str):
    previous = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def _impl():
    if _state["name"] == "numba":
        from . import jit
        return jit
    return vec


def _as_array(x):
    arr = np.asarray(x, dtype=np.float64)
    return np.ascontiguousarray(np.atleast_1d(arr)), arr.shape


def i0e(x):
    arr, shape = _as_array(x)
    return _impl().i0e(arr).reshape(shape)


def i1e(x):
    arr, shape = _as_array(x)
    return _impl().i1e(arr).reshape(shape)


def ncx2_unit_pdf(u, k):
    arr, shape = _as_array(u)
    return _impl().ncx2_unit_pdf(arr, float(k)).reshape(shape)


def marcum_q1_pair(a, b, rtol=1e-12, limit=200):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                               np.asarray(b, dtype=np.float64))
    shape = a.shape
    aa = np.ascontiguousarray(a.ravel())
    bb = np.ascontiguousarray(b.ravel())
    q, p, ok = _impl().marcum_q1_pair(aa, bb, float(rtol), int(limit))
    return q.reshape(shape), p.reshape(shape), np.asarray(ok).reshape(shape)


def capacity_nested(k_b, k_e, c_b, c_e, ratio, t_u, t_v, atol, rtol, limit):
    v, e, ok = _impl().capacity_nested(float(k_b), float(k_e), float(c_b), float(c_e),
                                       float(ratio), float(t_u), float(t_v),
                                       float(atol), float(rtol), int(limit))
    return float(v), float(e), bool(ok)


def capacity_single(k_b, c_b, t_u, atol, rtol, limit):
    v, e, ok = _impl().capacity_single(float(k_b), float(c_b), float(t_u),
                                       float(atol), float(rtol), int(limit))
    return float(v), float(e), bool(ok)


def _link(t):
    return tuple(float(v) for v in t)


def capacity_samples(z, link_b, link_e, gamma):
    z = np.ascontiguousarray(z, dtype=np.float64)
    return _impl().capacity_samples(z, _link(link_b), _link(link_e), float(gamma))


def capacity_moments(z, link_b, link_e, gamma):
    z = np.ascontiguousarray(z, dtype=np.float64)
    mean, m2 = _impl().capacity_moments(z, _link(link_b), _link(link_e), float(gamma))
    return float(mean), float(m2)


def outage_counts(z, link_b, link_e, gamma, thresholds):
    z = np.ascontiguousarray(z, dtype=np.float64)
    thr = np.ascontiguousarray(np.atleast_1d(thresholds), dtype=np.float64)
    return np.asarray(_impl().outage_counts(z, _link(link_b), _link(link_e),
                                            float(gamma), thr))
