from __future__ import annotations

import pytest

from cutseq.surface import l_surface, six_square_example, surface_from_cycles, torus


@pytest.fixture
def torus1():
    return torus()


@pytest.fixture
def lsurf():
    return l_surface()


@pytest.fixture
def six():
    return six_square_example()


@pytest.fixture
def cyclic4():
    return surface_from_cycles("(1 2 3 4)", "(1 2 3 4)", 4)


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = getattr(sys.modules.get("tests.test_acceptance"), "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
