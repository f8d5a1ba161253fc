import math

import pytest

from dtnnet.generators import ring_packing

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


def equal_gap_ring(n: int, gap_over_radius: float, L: float = 1.0):
    """Ring where the boundary gap equals the neighbor gap, both = t * R.

    With n, L and the gap ratio fixed, the disk radius is determined:
        R = s / (1 + s + t (s + 1/2)),  s = sin(pi/n).
    """
    s = math.sin(math.pi / n)
    t = gap_over_radius
    R = s / (1.0 + s + t * (s + 0.5))
    delta = t * R
    return ring_packing(n, L - R - delta, R, L)


@pytest.fixture
def ring8():
    """Standard ring fixture: 8 disks of radius 0.1 on radius 0.85, L = 1."""
    return ring_packing(8, 0.85, 0.1, 1.0)
