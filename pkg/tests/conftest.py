import math

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ivsqrt import FieldConfig

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FIG1 = FieldConfig(1.0, 4.0, -5.0)


def complexes(radius):
    """Complex numbers in a disc-bounding square, finite components only."""
    comp = st.floats(-radius, radius, allow_nan=False, allow_infinity=False)
    return st.builds(complex, comp, comp)


@st.composite
def field_configs(draw, u0=(0.3, 3.0), d0=(1.0, 6.0), d1=6.0, min_abs_d1=0.05):
    u = draw(st.floats(*u0))
    a = draw(st.floats(*d0))
    b = draw(st.floats(min_abs_d1, d1)) * draw(st.sampled_from([-1.0, 1.0]))
    return FieldConfig(u, a, b)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def fig1():
    return FIG1


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
