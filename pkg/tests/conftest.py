import pytest

from toric_residue.chambers import enumerate_chambers
from toric_residue.lattice import gale_dual, sequence_from_A

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def fix_p1():
    return gale_dual([[1], [-1]])


@pytest.fixture(scope="session")
def fix_p2():
    return gale_dual([[1, 0], [0, 1], [-1, -1]])


@pytest.fixture(scope="session")
def fix_f1():
    return sequence_from_A([[0, 1], [1, 1], [0, 1], [1, 0]])


@pytest.fixture(scope="session")
def f1_chamber(fix_f1):
    # the chamber {m x + n y : 0 < m < n}
    return next(c for c in enumerate_chambers(fix_f1.A.vectors) if c.contains([1, 2]))


@pytest.fixture(scope="session")
def under_p1():
    return sequence_from_A([[1], [1]])


@pytest.fixture(scope="session")
def p1cay(under_p1):
    from toric_residue.cayley import build_cayley

    return build_cayley(under_p1, [[0, 1]])


@pytest.fixture(scope="session")
def mix(under_p1):
    from toric_residue.cayley import build_cayley

    return build_cayley(under_p1, [[0], [1]])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        status, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status}  {detail}")
