import pytest

from ifs_spectra.triple import HadamardTriple


@pytest.fixture(scope="session")
def T2():
    """The 2-D reference system with one point cycle and one line set."""
    return HadamardTriple(
        [[4, 0], [1, 4]],
        [(0, 0), (0, 3), (1, 0), (1, 3)],
        [(0, 0), (2, 0), (0, 2), (2, 2)],
    )


@pytest.fixture(scope="session")
def T1():
    """First-component subsystem of T2."""
    return HadamardTriple([[4]], [(0,), (1,)], [(0,), (2,)])


@pytest.fixture(scope="session")
def T1b():
    """The 1-D system with two weight-1 cycles, {0} and {2/3}."""
    return HadamardTriple([[4]], [(0,), (3,)], [(0,), (2,)])
