"""Backend selection for the numeric kernels.

Numba is used when importable unless ``RASEC_DISABLE_NUMBA`` is set to a
truthy value, in which case the vectorised numpy implementations run instead.
"""
import os

ENV_FLAG = "RASEC_DISABLE_NUMBA"

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def numba_disabled_by_env() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


def default_backend() -> str:
    if HAVE_NUMBA and not numba_disabled_by_env():
        return "numba"
    return "numpy"
