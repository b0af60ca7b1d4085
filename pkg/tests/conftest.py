import pytest

from subthurston import Subsystem, constant, torus_trig
from subthurston.transfer import spectral_data


@pytest.fixture(scope="session")
def carpet():
    return Subsystem.carpet(3)


@pytest.fixture(scope="session")
def full3():
    return Subsystem.full(3)


@pytest.fixture(scope="session")
def trig03():
    return torus_trig([(1, 1, 0.3)])


@pytest.fixture(scope="session")
def zero():
    return constant(0.0)


@pytest.fixture(scope="session")
def carpet_trig_d4(carpet, trig03):
    return spectral_data(carpet, trig03, 4)


@pytest.fixture(scope="session")
def carpet_trig_d6(carpet, trig03):
    return spectral_data(carpet, trig03, 6)


@pytest.fixture(scope="session")
def carpet_zero_d4(carpet, zero):
    return spectral_data(carpet, zero, 4)


ACCEPTANCE = {}


@pytest.fixture
def verdict(request):
    """Record a one-line outcome for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE[number])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
