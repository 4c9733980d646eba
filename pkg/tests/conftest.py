import math

import pytest

from scring import ringcore as rc

ACCEPTANCE_LINES = []


@pytest.fixture
def material():
    return rc.MaterialSpec(T_c=1.2, lambda_L0=50e-9)


@pytest.fixture
def ring():
    return rc.RingSpec(radius=1e-6, cross_section=1e-14, wall_width=1e-7, N_s=1e6)


@pytest.fixture
def phi0(material):
    return rc.flux_quantum(material.q_pair)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def rel(a, b):
    return abs(a - b) / max(abs(b), math.ulp(0))
