import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as si

from rasec.errors import NonConvergent
from rasec.specfun import (QuadratureSpec, bessel_i0, bessel_i0e, bessel_i1, bessel_i1e,
                           integrate, integrate_semi_infinite, log_bessel_i0, log_bessel_i1,
                           marcum_q1, marcum_q1_complement)

mp.mp.dps = 40


def series_i(nu, x, terms=200):
    """Power series oracle for I_nu in exact-ish arithmetic."""
    x = mp.mpf(x)
    return sum((x / 2) ** (2 * k + nu) / (mp.factorial(k) * mp.factorial(k + nu))
               for k in range(terms))


def integral_i(nu, x):
    """(1/pi) int_0^pi exp(x cos t) cos(nu t) dt."""
    x = mp.mpf(x)
    return mp.quad(lambda t: mp.exp(x * mp.cos(t)) * mp.cos(nu * t), [0, mp.pi]) / mp.pi


def marcum_oracle(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    f = lambda t: t * mp.exp(-(t * t + a * a) / 2) * mp.besseli(0, a * t)
    return mp.quad(f, [b, b + 10, b + 40, mp.inf])


def test_i0_examples():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i0(1.0) == pytest.approx(float(series_i(0, 1)), rel=1e-14)
    assert bessel_i0(1.0) == pytest.approx(1.26606587775, rel=1e-11)
    assert bessel_i0(30.0) == pytest.approx(float(integral_i(0, 30)), rel=1e-10)


def test_i1_examples():
    assert bessel_i1(0.0) == 0.0
    assert bessel_i1(1.0) == pytest.approx(float(series_i(1, 1)), rel=1e-14)
    assert bessel_i1(1.0) == pytest.approx(0.56515910399, rel=1e-10)


@pytest.mark.parametrize("x", [1e-6, 0.3, 2.0, 7.5, 14.9, 15.0, 15.1, 22.0, 30.0, 55.0, 120.0])
def test_bessel_against_integral_definition(x):
    assert bessel_i0(x) == pytest.approx(float(integral_i(0, x)), rel=1e-12)
    assert bessel_i1(x) == pytest.approx(float(integral_i(1, x)), rel=1e-12)


@pytest.mark.parametrize("x", [0.5, 3.0, 14.99, 15.0, 40.0, 300.0])
def test_scaled_and_log_forms(x):
    assert bessel_i0e(x) == pytest.approx(float(mp.besseli(0, x) * mp.exp(-x)), rel=1e-13)
    assert bessel_i1e(x) == pytest.approx(float(mp.besseli(1, x) * mp.exp(-x)), rel=1e-13)
    assert math.exp(log_bessel_i0(x)) == pytest.approx(bessel_i0(x), rel=1e-12)
    assert math.exp(log_bessel_i1(x)) == pytest.approx(bessel_i1(x), rel=1e-12)


def test_log_form_beyond_overflow():
    assert log_bessel_i0(1e4) == pytest.approx(float(mp.log(mp.besseli(0, 10000))), rel=1e-13)
    assert math.isinf(bessel_i0(1e4))


def test_i1_derivative_identity():
    h = 1e-5
    for x in [0.5, 2.0, 10.0, 20.0]:
        d = (bessel_i1(x + h) - bessel_i1(x - h)) / (2 * h)
        assert abs(bessel_i0(x) - bessel_i1(x) / x - d) <= 1e-8 * bessel_i0(x)


def test_bessel_arrays():
    x = np.array([0.0, 1.0, 20.0])
    assert bessel_i0(x).shape == (3,)
    assert np.allclose(bessel_i0(x), [bessel_i0(v) for v in x], rtol=1e-15)


def test_marcum_edges():
    for a in [0.0, 0.5, 3.0, 10.0]:
        assert marcum_q1(a, 0.0) == 1.0
    for b in [0.0, 0.5, 2.0, 6.0]:
        assert marcum_q1(0.0, b) == pytest.approx(math.exp(-b * b / 2), rel=1e-15)


@pytest.mark.parametrize("a,b", [(2, 1), (0.5, 3), (3, 3), (1, 0.2), (6, 4), (4, 7), (10, 12),
                                 (1.41421356, 0.89), (0.01, 1.0), (20, 19)])
def test_marcum_against_integral(a, b):
    ref = marcum_oracle(a, b)
    assert marcum_q1(a, b) == pytest.approx(float(ref), rel=1e-10, abs=1e-14)
    assert marcum_q1_complement(a, b) == pytest.approx(float(1 - ref), rel=1e-10, abs=1e-14)


def test_marcum_deep_tail_relative():
    ref = marcum_oracle(1.0, 9.0)
    assert marcum_q1(1.0, 9.0) == pytest.approx(float(ref), rel=1e-10)


def test_marcum_rejects_negative():
    with pytest.raises(ValueError):
        marcum_q1(-1.0, 1.0)


def test_marcum_monotone_grid():
    a = np.linspace(0, 6, 20)
    b = np.linspace(0, 8, 20)
    A, B = np.meshgrid(a, b, indexing="ij")
    q = marcum_q1(A, B)
    assert np.all((q >= 0) & (q <= 1))
    assert np.all(np.diff(q, axis=1) <= 1e-15)   # nonincreasing in b
    assert np.all(np.diff(q, axis=0) >= -1e-15)  # nondecreasing in a


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 8), st.floats(0, 10))
def test_marcum_pair_sums_to_one(a, b):
    assert marcum_q1(a, b) + marcum_q1_complement(a, b) == pytest.approx(1.0, abs=1e-12)


def test_semi_infinite_examples():
    assert integrate_semi_infinite(lambda x: np.exp(-x)) == pytest.approx(1.0, abs=1e-10)
    assert integrate_semi_infinite(lambda x: x * np.exp(-x)) == pytest.approx(1.0, abs=1e-10)
    assert integrate_semi_infinite(lambda x: np.exp(-x * x), a=0.0) == \
        pytest.approx(math.sqrt(math.pi) / 2, abs=1e-10)


def test_semi_infinite_scalar_callable():
    assert integrate_semi_infinite(lambda x: math.exp(-2 * x)) == pytest.approx(0.5, abs=1e-10)


def test_semi_infinite_non_decaying():
    with pytest.raises(NonConvergent):
        integrate_semi_infinite(lambda x: np.ones_like(x))


def test_budget_exhaustion():
    spec = QuadratureSpec(atol=1e-14, rtol=1e-14, limit=1)
    with pytest.raises(NonConvergent):
        integrate(lambda x: np.abs(np.sin(40 * x)) ** 0.5, 0.0, 10.0, spec)


def test_finite_integral_vs_scipy():
    f = lambda x: np.log1p(x) * np.exp(-x / 3)
    ref, _ = si.quad(f, 0, 7, epsabs=1e-13, epsrel=1e-13)
    assert integrate(f, 0, 7) == pytest.approx(ref, rel=1e-9)
    assert integrate(f, 7, 0) == pytest.approx(-ref, rel=1e-9)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(atol=0)
    with pytest.raises(ValueError):
        QuadratureSpec(limit=0)


@pytest.mark.parametrize("a", [200.0, 1e4, 1.4e4])
def test_marcum_large_arguments(backend, a):
    from scipy import stats
    for off in (-6.0, -1.0, 0.0, 1.0, 6.0):
        b = a + off
        ref = stats.ncx2.sf(b * b, 2, a * a)
        refc = stats.ncx2.cdf(b * b, 2, a * a)
        assert marcum_q1(a, b) == pytest.approx(ref, rel=1e-6)
        assert marcum_q1_complement(a, b) == pytest.approx(refc, rel=1e-6)
    assert marcum_q1(a, a - 60.0) == 1.0
