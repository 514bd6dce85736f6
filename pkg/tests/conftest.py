import sys

import pytest
from hypothesis import settings

from qinfo import RandomStream, StateVector

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SQRT_HALF = 2 ** -0.5


@pytest.fixture
def ket0():
    return StateVector.basis(2, 0)


@pytest.fixture
def ket1():
    return StateVector.basis(2, 1)


@pytest.fixture
def ket_plus():
    return StateVector([SQRT_HALF, SQRT_HALF])


@pytest.fixture
def ket_minus():
    return StateVector([SQRT_HALF, -SQRT_HALF])


@pytest.fixture
def rng():
    return RandomStream(12345)


def random_ket(rng: RandomStream, d: int) -> StateVector:
    g = rng.generator
    return StateVector.normalize(g.standard_normal(d) + 1j * g.standard_normal(d))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = sorted(getattr(module, "VERDICTS", []), key=lambda s: int(s.split("criterion ")[1].split(":")[0]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
