import numpy as np
import pytest

from invlattice import GF, Operator, Subspace, jordan_operator


def vec(*entries):
    return np.array(entries, dtype=np.int64)


def span(p, n, *rows):
    return Subspace.span(GF(p), np.array(rows, dtype=np.int64).reshape(-1, n), n)


@pytest.fixture
def cyclic_z():
    """diag(0, N3) over GF(2) and Z = <e1+e3>."""
    f = jordan_operator(GF(2), [1, 3])
    return f, span(2, 4, [1, 0, 1, 0], [0, 0, 0, 1])


@pytest.fixture
def marked_pair():
    f = jordan_operator(GF(2), [1, 3, 2])
    z1 = span(2, 6, [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1])
    z2 = span(2, 6, [1, 0, 1, 0, 1, 0], [0, 0, 0, 1, 0, 1])
    return f, z1, z2


@pytest.fixture
def n2n3():
    return jordan_operator(GF(2), [2, 3])


@pytest.fixture
def zero2():
    return Operator(GF(2), np.zeros((2, 2), dtype=np.int64))


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
