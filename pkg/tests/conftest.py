import numpy as np
import pytest

from linescan import Calibration, SweepConfig
from linescan.simulator import flat_scene, plateau_scene, ramp_scene

# Baseline column 40, k = 300 - (120 + 40) = 140, theta ~ 15.64 degrees.
SCAN_CALIB = dict(s=300.0, D=500.0, r=240.0, x0=40.0)
# Ramp slope chosen so slope * row never lands on a .5 rounding tie.
RAMP_SLOPE = 0.3141


@pytest.fixture
def calib():
    return Calibration(**SCAN_CALIB)


@pytest.fixture
def sweep():
    return SweepConfig(delta_theta=0.5, frame_count=20, frame_step_override=5.0)


@pytest.fixture
def scenes():
    # 100 x 200 grid; rows 201..239 of a 240-row frame see the bare surface.
    return {
        "flat": flat_scene(11, 21, 10.0, 500.0),
        "plateau": plateau_scene(10.0, 11, 21, 10.0, 500.0),
        "ramp": ramp_scene(RAMP_SLOPE, 11, 21, 10.0, 500.0),
    }


@pytest.fixture
def rng():
    return np.random.default_rng(7357)


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, ok, detail)``."""

    def record(number, ok, detail):
        ACCEPTANCE_RESULTS.append((number, "PASS" if ok else "FAIL", detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{status}] {number}. {detail}")
