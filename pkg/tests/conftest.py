import pytest

from imaged import data
from imaged.cli import load_morphism
from imaged.oracle import FactorOracle


@pytest.fixture(scope="session")
def m37():
    return load_morphism("m37")


@pytest.fixture(scope="session")
def m342():
    return load_morphism("m342")


@pytest.fixture(scope="session")
def oracle37(m37):
    return FactorOracle.build(m37, "7/4", 300)


@pytest.fixture(scope="session")
def oracle342(m342):
    return FactorOracle.build(m342, "7/4", 1952)


@pytest.fixture(scope="session")
def roots342(oracle342):
    return oracle342.square_roots(244)


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
