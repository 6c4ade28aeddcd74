import pytest

from stabletwist.catalog import (dihedral_algebra, extraspecial_group_algebra,
                                 klein_commutative_algebra, semidihedral_algebra)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def d22():
    return dihedral_algebra(2, 2)


@pytest.fixture(scope="session")
def sd221():
    return semidihedral_algebra(2, 1, 2)


@pytest.fixture(scope="session")
def klein3():
    return klein_commutative_algebra(3)


@pytest.fixture(scope="session")
def es3():
    return extraspecial_group_algebra(3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
