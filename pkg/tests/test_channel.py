import math

import numpy as np
import pytest
from scipy import integrate as si
from scipy import stats

from rasec.channel import (cdf_channel_power, fading_params, instant_secrecy_capacity,
                           large_scale, mean_channel_power, pdf_channel_power,
                           sample_channel, sample_channel_power, snr_linear, unit_tail_point)
from rasec.errors import DegenerateDensity
from rasec.geometry import Scenario, alpha_max, default_scenario, phi_inv
from rasec.specfun import integrate_semi_infinite, marcum_q1

from conftest import random_scenario


def test_large_scale_examples(base):
    assert large_scale(base, "user") == pytest.approx(8e-9, rel=1e-12)
    assert large_scale(base, "eavesdropper") == pytest.approx(0.001 / 70 ** 3, rel=1e-12)
    assert large_scale(base, "eavesdropper") == pytest.approx(2.915e-9, rel=1e-3)
    s = Scenario(q_b=[1, 0, 0], q_e=[0, 2, 0], beta_b=2.7)
    assert large_scale(s, "user") == pytest.approx(s.zeta_0)


def test_fading_params_invariants(base):
    for end in ("user", "eavesdropper"):
        fp = fading_params(base, end)
        assert fp.L > 0 and fp.eta > 0
        assert fp.eta * fp.L * base.G_0 == pytest.approx(1 + fp.K, rel=1e-12)
    assert fading_params(base, "user").los_phase == pytest.approx(-2 * math.pi * 50 / 0.125)


def test_bad_end(base):
    with pytest.raises(ValueError):
        large_scale(base, "relay")


def test_snr_conversion():
    assert snr_linear(25, -60) == pytest.approx(10 ** 8.5)


def test_sample_pure_los_limit(base):
    s = Scenario(q_b=base.q_b, q_e=base.q_e, K_b=1e12, K_e=1e12)
    rng = np.random.default_rng(1)
    x = sample_channel_power(rng, s, 1.4, "user", size=1000)
    m = float(mean_channel_power(s, 1.4, "user"))
    assert np.allclose(x, m, rtol=1e-4)


def test_sample_zero_gain_exact(base):
    rng = np.random.default_rng(2)
    x = sample_channel_power(rng, base, alpha_max(base), "eavesdropper", size=1000)
    assert np.all(x == 0.0)
    assert isinstance(sample_channel_power(rng, base, 1.2, "user"), float)


def test_sample_mean(base):
    rng = np.random.default_rng(3)
    x = sample_channel_power(rng, base, 1.5, "user", size=1_000_000)
    expected = large_scale(base, "user") * base.G_0 * phi_inv(base, 1.5, "user")
    se = x.std(ddof=1) / math.sqrt(x.size)
    assert abs(x.mean() - expected) < 3 * se


def test_determinism(base):
    a = sample_channel(np.random.default_rng(7), base, 1.3, 1000)
    b = sample_channel(np.random.default_rng(7), base, 1.3, 1000)
    assert np.array_equal(a.power_b, b.power_b) and np.array_equal(a.power_e, b.power_e)
    assert np.all(a.power_b >= 0) and np.all(a.power_e >= 0)


def test_phase_irrelevance(base):
    x1 = sample_channel_power(np.random.default_rng(4), base, 1.2, "user", 400_000, los_phase=0.0)
    x2 = sample_channel_power(np.random.default_rng(5), base, 1.2, "user", 400_000, los_phase=2.1)
    se = math.sqrt(x1.var() / x1.size + x2.var() / x2.size)
    assert abs(x1.mean() - x2.mean()) < 3 * se
    q1, q2 = (x1 ** 2), (x2 ** 2)
    se2 = math.sqrt(q1.var() / q1.size + q2.var() / q2.size)
    assert abs(q1.mean() - q2.mean()) < 3 * se2


@pytest.mark.parametrize("alpha", [1.0, 1.6, 2.4])
@pytest.mark.parametrize("end", ["user", "eavesdropper"])
def test_pdf_normalisation_and_mean(base, alpha, end):
    m = float(mean_channel_power(base, alpha, end))
    total = integrate_semi_infinite(lambda x: pdf_channel_power(x, base, alpha, end), scale=m)
    mean = integrate_semi_infinite(lambda x: x * pdf_channel_power(x, base, alpha, end), scale=m)
    assert total == pytest.approx(1.0, abs=1e-8)
    assert mean == pytest.approx(m, rel=1e-8)


def test_pdf_matches_scipy_ncx2(base):
    # 2 (1+K) |h|^2 / m is noncentral chi-square with 2 dof and noncentrality 2K
    for k in (0.0, 1.0, 5.0, 30.0):
        s = Scenario(q_b=base.q_b, q_e=base.q_e, K_b=k)
        m = float(mean_channel_power(s, 1.3, "user"))
        x = np.linspace(0, 6 * m, 50)[1:]
        c = 2 * (1 + k) / m
        ref = stats.ncx2.pdf(c * x, 2, max(2 * k, 1e-300)) * c
        assert np.allclose(pdf_channel_power(x, s, 1.3, "user"), ref, rtol=1e-9, atol=0)
        # at the origin the density is (1+K) e^{-K} / m
        assert pdf_channel_power(0.0, s, 1.3, "user") == pytest.approx((1 + k) * math.exp(-k) / m)


def test_pdf_rayleigh_limit(base):
    s = Scenario(q_b=base.q_b, q_e=base.q_e, K_b=0.0)
    m = float(mean_channel_power(s, 1.3, "user"))
    x = np.linspace(0, 5 * m, 20)
    assert np.allclose(pdf_channel_power(x, s, 1.3, "user"), np.exp(-x / m) / m, rtol=1e-14)


def test_pdf_degenerate(base):
    with pytest.raises(DegenerateDensity):
        pdf_channel_power(1e-9, base, alpha_max(base), "eavesdropper")


def test_pdf_large_argument_no_overflow():
    s = Scenario(q_b=[10, 0, 0], q_e=[0, 10, 0], K_b=500.0)
    m = float(mean_channel_power(s, 1.0, "user"))
    v = pdf_channel_power(np.array([0.5, 1.0, 1.5]) * m, s, 1.0, "user")
    assert np.all(np.isfinite(v)) and v[1] > v[0] and v[1] > v[2]


def test_sampling_matches_pdf_ks():
    rng = np.random.default_rng(9)
    for _ in range(5):
        s = random_scenario(rng, front=True, K_b=float(rng.uniform(0, 8)))
        a = float(rng.uniform(1.0, alpha_max(s)))
        x = sample_channel_power(rng, s, a, "user", size=100_000)
        m = float(mean_channel_power(s, a, "user"))
        grid = np.sort(x)
        # CDF from the density by quadrature on a coarse grid, interpolated
        knots = np.linspace(0, grid[-1], 400)
        pdf = pdf_channel_power(knots, s, a, "user")
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(knots))])
        emp = np.arange(1, grid.size + 1) / grid.size
        d = np.max(np.abs(np.interp(grid, knots, cdf) - emp))
        assert d < 1.63 / math.sqrt(grid.size)


def test_cdf_against_marcum(base):
    m = float(mean_channel_power(base, 1.2, "user"))
    x = 0.7 * m
    k = base.K_b
    assert cdf_channel_power(x, base, 1.2, "user") == pytest.approx(
        1 - marcum_q1(math.sqrt(2 * k), math.sqrt(2 * (1 + k) * 0.7)), rel=1e-12)


def test_unit_tail_point():
    for k in (0.0, 1.0, 5.0):
        t = unit_tail_point(k, 1e-10)
        tail = 1 - stats.ncx2.cdf(2 * (1 + k) * t, 2, max(2 * k, 1e-300))
        assert tail <= 1e-10 * 1.001
        assert tail >= 1e-10 * 0.9
    assert unit_tail_point(0.0, 1e-10) == pytest.approx(math.log(1e10), rel=1e-5)


def test_instant_secrecy_capacity():
    assert instant_secrecy_capacity(3.0, 3.0, 2.0) == 0.0
    assert instant_secrecy_capacity(1.0, 0.0, 1.0) == pytest.approx(1.0)
    assert instant_secrecy_capacity(1.0, 2.0, 5.0) == 0.0
    v = instant_secrecy_capacity(np.array([1.0, 3.0]), np.array([0.0, 1.0]), 1.0)
    assert np.allclose(v, [1.0, 1.0])
