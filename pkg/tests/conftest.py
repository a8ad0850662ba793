import numpy as np
import pytest

from bsdlab import catalog, sieve_primes


@pytest.fixture(scope="session")
def table_1e6():
    return sieve_primes(10**6)


@pytest.fixture(scope="session")
def table_1e4():
    return sieve_primes(10**4)


@pytest.fixture(scope="session")
def curve_j1728():
    return catalog.curve_for("cm-j1728")


@pytest.fixture(scope="session")
def curve_37a1():
    return catalog.curve_for("37a1")


def records_as_arrays(records):
    """Pack a scan into plain arrays so runs can be compared bitwise."""
    ps = np.array([r.p for r in records], dtype=np.uint64)
    aps = np.array([-(10**18) if r.a_p is None else r.a_p for r in records],
                   dtype=np.int64)
    thetas = np.array(
        [np.nan if r.theta_p is None else r.theta_p for r in records],
        dtype=np.float64)
    good = np.array([r.good for r in records], dtype=bool)
    ss = np.array([bool(r.supersingular) for r in records], dtype=bool)
    return ps, aps, thetas, good, ss
