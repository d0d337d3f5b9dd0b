import random
import sys

import pytest
from flint import fmpq, fmpq_poly
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(min_value=-20, max_value=20)
rationals = st.builds(lambda p, q: fmpq(p, q), st.integers(-50, 50), st.integers(1, 12))


def polys(max_degree=6, nonzero=False):
    coeffs = st.lists(rationals, min_size=1, max_size=max_degree + 1)
    strat = coeffs.map(fmpq_poly)
    if nonzero:
        strat = strat.filter(lambda p: not p.is_zero())
    return strat


def random_poly(rng, degree, bound=9):
    return fmpq_poly([fmpq(rng.randint(-bound, bound), rng.randint(1, 4)) for _ in range(degree + 1)])


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
