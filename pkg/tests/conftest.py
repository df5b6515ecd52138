import pytest

from qet_ion.crystal_modes import CrystalSpec, build_mode_decomposition, solve_equilibrium
from qet_ion.fock_oracle import FockBasisSpec, build_workspace


def _setup(n):
    spec = CrystalSpec(n)
    return spec, build_mode_decomposition(solve_equilibrium(spec))


@pytest.fixture(scope="session")
def two_ions():
    return _setup(2)


@pytest.fixture(scope="session")
def three_ions():
    return _setup(3)


@pytest.fixture(scope="session")
def ws2(two_ions):
    spec, modes = two_ions
    return build_workspace(spec, modes, FockBasisSpec(2, 16))


@pytest.fixture(scope="session")
def ws3(three_ions):
    spec, modes = three_ions
    return build_workspace(spec, modes, FockBasisSpec(3, 8))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LOG
    except ImportError:
        return
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
