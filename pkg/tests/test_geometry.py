import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rasec.errors import AlphaMaxUndefined, DegenerateGeometry, ValidationError
from rasec.geometry import (Scenario, alpha_max, angle_bae, boresight_from_alpha,
                            cos_epsilon, default_scenario, direction_from_angles,
                            effective_gain, phi_inv, position, psi, scenario_warnings)

from conftest import random_scenario

coord = st.floats(-100, 100, allow_nan=False)
vec = st.tuples(coord, coord, coord).filter(lambda v: np.linalg.norm(v) > 1e-3)


def test_default_positions(base):
    assert np.allclose(base.q_b, [25.0, 0.0, 50 * math.sin(math.radians(60))])
    assert np.allclose(base.q_e, [70 * math.cos(math.radians(30)), 0.0, 35.0])


def test_boresight_alpha_one_points_at_user(base):
    b = boresight_from_alpha(base, 1.0)
    expected = [math.cos(math.radians(60)), 0.0, math.sin(math.radians(60))]
    assert np.allclose(b.direction, expected, atol=1e-12)


def test_boresight_alpha_max_orthogonal(base):
    b = boresight_from_alpha(base, alpha_max(base))
    assert abs(b.direction @ base.q_e) <= 1e-9 * np.linalg.norm(base.q_e)


def test_boresight_simple_case():
    s = Scenario(q_b=[1, 0, 0], q_e=[0, 1, 0])
    b = boresight_from_alpha(s, 2.0)
    assert np.allclose(b.direction, np.array([2, -1, 0]) / math.sqrt(5), atol=1e-12)


def test_boresight_rejects_alpha_below_one(base):
    with pytest.raises(ValueError):
        boresight_from_alpha(base, 0.5)


def test_boresight_degenerate():
    # q_e + 2 (q_b - q_e) = 0 when q_b = q_e / 2
    s = Scenario(q_b=[1, 0, 0], q_e=[2, 0, 0])
    with pytest.raises(DegenerateGeometry):
        boresight_from_alpha(s, 2.0)


def test_alpha_max_examples(base):
    assert alpha_max(base) == pytest.approx(2.62, abs=0.01)
    assert alpha_max(Scenario(q_b=[1, 0, 0], q_e=[0, 3, 0])) == pytest.approx(1.0)
    assert alpha_max(Scenario(q_b=[0, 0, 1], q_e=[1, 0, 1])) == pytest.approx(2.0)


def test_alpha_max_undefined():
    # |q_e|^2 - q_b.q_e = 1 - 2 < 0
    with pytest.raises(AlphaMaxUndefined):
        alpha_max(Scenario(q_b=[2, 0, 0], q_e=[1, 0, 0]))


def test_cos_epsilon_examples():
    assert cos_epsilon([1, 0, 0], [1, 0, 0]) == 1.0
    assert cos_epsilon([1, 0, 0], [0, 1, 0]) == 0.0
    assert cos_epsilon([1, 1, 0], [1, 0, 0]) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    with pytest.raises(DegenerateGeometry):
        cos_epsilon([0, 0, 0], [1, 0, 0])


def test_effective_gain_examples():
    assert effective_gain([1, 0, 0], [5, 0, 0], 4.0) == 4.0
    d120 = [math.cos(math.radians(120)), math.sin(math.radians(120)), 0]
    assert effective_gain(d120, [1, 0, 0], 4.0) == 0.0
    d60 = [math.cos(math.radians(60)), math.sin(math.radians(60)), 0]
    assert effective_gain(d60, [1, 0, 0], 4.0) == pytest.approx(2.0, rel=1e-14)


def test_phi_inv_examples(base):
    am = alpha_max(base)
    assert phi_inv(base, 1.0, "user") == pytest.approx(1.0, abs=1e-15)
    assert phi_inv(base, am, "eavesdropper") == 0.0
    assert phi_inv(base, am, "user") == pytest.approx(0.5, rel=1e-12)


def test_phi_inv_matches_cos_epsilon(base):
    for a in np.linspace(1, alpha_max(base), 7):
        d = boresight_from_alpha(base, a).direction
        assert phi_inv(base, a, "user") == pytest.approx(cos_epsilon(d, base.q_b), abs=1e-14)
        assert phi_inv(base, a, "eavesdropper") == pytest.approx(cos_epsilon(d, base.q_e),
                                                                  abs=1e-12)


def test_phi_inv_vectorised(base):
    a = np.linspace(1, 2, 5)
    v = phi_inv(base, a, "user")
    assert v.shape == (5,)
    assert np.allclose(v, [phi_inv(base, x, "user") for x in a])


def test_angle_bae_examples(base):
    assert angle_bae(base) == pytest.approx(math.pi / 6, rel=1e-12)
    assert angle_bae(Scenario(q_b=[1, 2, 3], q_e=[2, 4, 6])) == pytest.approx(0.0, abs=1e-7)
    assert angle_bae(Scenario(q_b=[1, 0, 0], q_e=[0, 0, 2])) == pytest.approx(math.pi / 2)


def test_scenario_validation():
    with pytest.raises(ValidationError):
        Scenario(q_b=[0, 0, 0], q_e=[1, 0, 0])
    with pytest.raises(ValidationError):
        Scenario(q_b=[1, 0, 0], q_e=[0, 1, 0], zeta_0=0.0)
    with pytest.raises(ValidationError):
        Scenario(q_b=[1, 0, 0], q_e=[0, 1, 0], K_b=-1)
    with pytest.raises(ValidationError):
        Scenario(q_b=[1, 0, 0], q_e=[0, 1, 0], wavelength=-0.1)
    with pytest.raises(ValidationError):
        Scenario(q_b=[1, 0, 0], q_e=[0, 1, 0], p_dbm=5000)


def test_gamma(base):
    assert base.gamma == pytest.approx(10 ** 7.6)


def test_behind_antenna_flagged():
    s = Scenario(q_b=[1, 0, 0], q_e=[-1, 0.5, 0])
    notes = scenario_warnings(s)
    assert any("behind" in n for n in notes)
    assert scenario_warnings(default_scenario()) == []


def test_position():
    assert np.allclose(position(50, 60), [25, 0, 43.30127018922193])


def test_round_trip_random_scenarios():
    rng = np.random.default_rng(20)
    for _ in range(1000):
        s = random_scenario(rng)
        a = rng.uniform(1.0, max(1.0, alpha_max(s)))
        b = boresight_from_alpha(s, a)
        assert np.linalg.norm(b.direction) == pytest.approx(1.0, abs=1e-12)
        assert 0 <= b.angles.theta_z <= math.pi
        assert -math.pi < b.angles.theta_a <= math.pi
        assert np.allclose(direction_from_angles(b.angles), b.direction, atol=1e-9)
        v = s.q_e + a * (s.q_b - s.q_e)
        assert np.allclose(b.direction, v / np.linalg.norm(v), atol=1e-12)


def test_orthogonality_at_alpha_max_random():
    rng = np.random.default_rng(21)
    for _ in range(500):
        s = random_scenario(rng, front=True)
        am = alpha_max(s)
        v = s.q_e + am * (s.q_b - s.q_e)
        assert abs(v @ s.q_e) <= 1e-9 * np.linalg.norm(s.q_e) * np.linalg.norm(v)


def test_psi_nondecreasing_random():
    """The user/eavesdropper cosine ratio grows along the boresight family."""
    rng = np.random.default_rng(22)
    checked = 0
    for _ in range(300):
        s = random_scenario(rng, front=True)
        am = alpha_max(s)
        a = np.linspace(1.0, am, 400)[:-1]
        if np.any(phi_inv(s, a, "eavesdropper") <= 0):
            continue
        r = psi(s, a)
        assert np.all(np.diff(r) >= -1e-12 * np.abs(r[1:]))
        checked += 1
    assert checked > 100


@settings(max_examples=200, deadline=None)
@given(vec, vec, st.floats(0.0, 1.0))
def test_effective_gain_bounded(d, q, g):
    g0 = 0.1 + 10 * g
    v = effective_gain(d, q, g0)
    assert 0.0 <= v <= g0


@settings(max_examples=200, deadline=None)
@given(vec, vec)
def test_cos_epsilon_range_and_symmetry(d, q):
    c = cos_epsilon(d, q)
    assert -1.0 <= c <= 1.0
    assert c == pytest.approx(cos_epsilon(q, d), abs=1e-12)
