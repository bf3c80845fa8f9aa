import pytest

from gapsieve.constellation import parse
from gapsieve.gapcycle import build_cycle, step_recursion

# The fixed constellation suite exercised across scan, recurrence, and sieve tests.
SUITE_TEXTS = ["2", "4", "6", "8", "242", "2,10,2", "66", "666", "24", "42"]


@pytest.fixture(scope="session")
def suite():
    return [parse(t) for t in SUITE_TEXTS]


@pytest.fixture(scope="session")
def cycles():
    """Stage cycles up to 13 (small enough for any test to scan freely)."""
    return {p: build_cycle(p) for p in (2, 3, 5, 7, 11, 13)}


@pytest.fixture(scope="session")
def big_cycles(cycles):
    """Stage cycles up to 19, built once per session."""
    out = dict(cycles)
    c = out[13]
    for p in (17, 19):
        c = step_recursion(c)
        out[p] = c
    return out
