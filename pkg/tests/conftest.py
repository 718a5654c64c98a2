import numpy as np
import pytest

from polaronlab.formfactor import form_factors
from polaronlab.phasespace import PhasePoint, make_grid, smooth_field


def random_state(grid, rng, scale=1.0):
    """Generic random phase-space point (rough field)."""
    return PhasePoint(
        scale * rng.normal(size=grid.d),
        scale * rng.normal(size=grid.d),
        scale * (rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def grid1():
    return make_grid(1, 2.0, 1.0, 64)


@pytest.fixture(scope="session")
def grid3():
    return make_grid(3, 2.0, 1.0, 12)


@pytest.fixture(scope="session")
def ff1(grid1):
    return form_factors(grid1)


@pytest.fixture(scope="session")
def ff3(grid3):
    return form_factors(grid3)


@pytest.fixture(params=["d1", "d3"])
def ff(request, ff1, ff3):
    return {"d1": ff1, "d3": ff3}[request.param]


@pytest.fixture(scope="session")
def pinned_state(grid1):
    """u0 = (0, 1, alpha0), alpha0 the seed-0 smooth field: the pinned acceptance state."""
    return PhasePoint([0.0], [1.0], smooth_field(grid1, np.random.default_rng(0)))


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, ok, detail):
        _ACCEPTANCE.append((number, ok, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}")
