import pytest
from hypothesis import settings

from curvesing import Poly
from curvesing.rational import QQ

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# lines printed by tests/test_acceptance.py, echoed once more at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def poly_from(ring, terms):
    """Build a Poly from a list of (exponent tuple, int coefficient)."""
    acc = {}
    for m, c in terms:
        acc[m] = acc.get(m, 0) + c
    return Poly(ring, {m: QQ(c) for m, c in acc.items() if c})


@pytest.fixture
def xyz():
    return ("x", "y", "z")
