import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from skidslip_ncs import DelayBounds, LiftedSystem, Pose, RobotGeometry, TrajectorySegment
from skidslip_ncs.linearization import build_linear_model

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def geom():
    return RobotGeometry(0.1, 0.5)


@pytest.fixture
def seg():
    return TrajectorySegment(Pose(0.0, 0.0, 0.0), 1.0)


@pytest.fixture
def bounds():
    return DelayBounds(0.02, 0.06, 0.1)


@pytest.fixture
def lifted(seg, geom, bounds):
    return LiftedSystem(build_linear_model(seg, geom), bounds)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
