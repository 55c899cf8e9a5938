import math
import sys

import pytest

from fockfringe.wavepacket import WavepacketSpec

FS = 1e-15
QUARTZ_TAUS = [k * 110 * FS for k in range(8)]


@pytest.fixture
def spec():
    return WavepacketSpec()


def alpha_mag(tau, delta_omega=3.99e12):
    return math.exp(-((delta_omega * tau) ** 2) / 4)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
