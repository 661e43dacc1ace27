import numpy as np
import pytest

from rasec import kernels
from rasec.errors import AlphaMaxUndefined
from rasec.geometry import Scenario, alpha_max, default_scenario

BACKENDS = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


@pytest.fixture
def base():
    return default_scenario()


def random_point(rng, lo=10.0, hi=200.0):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v) * rng.uniform(lo, hi)


def random_scenario(rng, front=False, p_range=(-20.0, 50.0), **overrides):
    """Random positions, path losses and power with alpha_max defined.

    ``front=True`` additionally requires q_b . q_e > 0 so the eavesdropper is
    in front of the antenna at alpha = 1 (the interesting LoS cases).
    """
    while True:
        kw = dict(q_b=random_point(rng), q_e=random_point(rng),
                  beta_b=rng.uniform(2.0, 4.0), beta_e=rng.uniform(2.0, 4.0),
                  p_dbm=rng.uniform(*p_range))
        kw.update(overrides)
        s = Scenario(**kw)
        try:
            amax = alpha_max(s)
        except AlphaMaxUndefined:
            continue
        if front and not (amax > 1.0 + 1e-6):
            continue
        return s


# acceptance lines collected by tests/test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
