from __future__ import annotations

import pytest

from wavespin.core import Spin, StateIndex, WellGeometry, derive_params

GEOM10 = WellGeometry(10e-9, 10e-9)
GEOM_RECT = WellGeometry(50e-9, 20e-9)

# Filled by test_acceptance.py; echoed once at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def make(nx: int, ny: int, spin: Spin = Spin.UP, geom: WellGeometry = GEOM10):
    state = StateIndex(nx, ny, spin)
    return derive_params(state, geom), state, geom


@pytest.fixture
def geom10() -> WellGeometry:
    return GEOM10


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
