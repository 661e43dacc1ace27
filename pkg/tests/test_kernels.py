"""The numba kernels and their numpy twins must agree."""
import os
import subprocess
import sys

import numpy as np
import pytest

from rasec import kernels
from rasec.avg_secrecy import normal_blocks
from rasec.channel import link_coefficients
from rasec.geometry import default_scenario

pytestmark = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def both(fn):
    out = {}
    for name in ("numpy", "numba"):
        with kernels.use_backend(name):
            out[name] = fn()
    return out["numpy"], out["numba"]


def test_bessel_equivalence():
    x = np.concatenate([np.linspace(0, 40, 801), [100.0, 1e3, 1e5]])
    a, b = both(lambda: (kernels.i0e(x), kernels.i1e(x)))
    assert np.allclose(a[0], b[0], rtol=1e-15, atol=0)
    assert np.allclose(a[1], b[1], rtol=1e-15, atol=0)


def test_ncx2_pdf_equivalence():
    u = np.linspace(0, 30, 500)
    for k in (0.0, 1.0, 5.0, 50.0):
        a, b = both(lambda: kernels.ncx2_unit_pdf(u, k))
        assert np.allclose(a, b, rtol=1e-14, atol=1e-300)


def test_marcum_equivalence():
    rng = np.random.default_rng(0)
    a = rng.uniform(0, 8, 300)
    bb = rng.uniform(0, 10, 300)
    (qa, pa, oka), (qb, pb, okb) = both(lambda: kernels.marcum_q1_pair(a, bb))
    assert oka.all() and okb.all()
    assert np.allclose(qa, qb, rtol=1e-13, atol=1e-16)
    assert np.allclose(pa, pb, rtol=1e-13, atol=1e-16)


def test_capacity_integral_equivalence():
    args = (1.0, 1.0, 1.27, 0.5, 2.0, 24.0, 24.0, 1e-8, 1e-8, 200)
    a, b = both(lambda: kernels.capacity_nested(*args))
    assert a[2] and b[2]
    assert a[0] == pytest.approx(b[0], rel=1e-12)
    a, b = both(lambda: kernels.capacity_single(0.0, 1.0, 40.0, 1e-10, 1e-10, 200))
    assert a[0] == pytest.approx(b[0], rel=1e-12)


def test_mc_reductions_equivalence():
    s = default_scenario()
    z = next(normal_blocks(100_000, 3))
    lb = link_coefficients(s, 1.7, "user")
    le = link_coefficients(s, 1.7, "eavesdropper")
    a, b = both(lambda: kernels.capacity_samples(z, lb, le, s.gamma))
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)
    (ma, m2a), (mb, m2b) = both(lambda: kernels.capacity_moments(z, lb, le, s.gamma))
    assert ma == pytest.approx(mb, rel=1e-12)
    assert m2a == pytest.approx(m2b, rel=1e-9)
    thr = np.array([0.0, 0.25, 0.5, 1.0, 2.0])
    ca, cb = both(lambda: kernels.outage_counts(z, lb, le, s.gamma, thr))
    assert np.array_equal(ca, cb)


def test_backend_switch():
    prev = kernels.backend()
    with kernels.use_backend("numpy"):
        assert kernels.backend() == "numpy"
    assert kernels.backend() == prev
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_env_flag_selects_numpy():
    env = dict(os.environ, RASEC_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from rasec import kernels; print(kernels.backend())"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"
