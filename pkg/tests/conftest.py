import pytest

from necrosim.evolution import Discretization, PhiOperator
from necrosim.stationary import GeometryParams, solve_stationary


@pytest.fixture(scope="session")
def geom():
    return GeometryParams(2.0, 1.0)


@pytest.fixture(scope="session")
def bio(geom):
    return solve_stationary(geom, 1.0).bio


@pytest.fixture(scope="session")
def phi16(geom, bio):
    return PhiOperator(geom, bio, Discretization(modes=16))


_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record and print one acceptance line; the assertion stays with the test."""

    def report(n: int, passed: bool, detail: str) -> bool:
        line = f"CRITERION {n}: {'PASS' if passed else 'FAIL'}  {detail}"
        _CRITERIA.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
