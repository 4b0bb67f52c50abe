import math

import numpy as np
import pytest

from sphereiso.geometry import make_clifford, make_equator

CATALOG = [make_clifford(1, 1), make_clifford(1, 2), make_clifford(2, 2), make_equator(2), make_equator(3)]

SQ2 = math.sqrt(2.0)
VOL_T11 = 2.0 * math.pi**2


@pytest.fixture
def t11():
    return make_clifford(1, 1)


@pytest.fixture
def t12():
    return make_clifford(1, 2)


@pytest.fixture
def t22():
    return make_clifford(2, 2)


def sample_coords(M, N, seed, margin=0.0):
    """Uniform points of the chart box, optionally kept ``margin`` away from polar singularities."""
    rng = np.random.default_rng(seed)
    lo, hi = (np.array(b) for b in M.chart_box())
    polar = hi < 2 * math.pi
    lo = np.where(polar, lo + margin, lo)
    hi = np.where(polar, hi - margin, hi)
    return lo + (hi - lo) * rng.random((N, M.n))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
