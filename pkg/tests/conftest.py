from pathlib import Path

import pytest

from toda_integrals.diffring import DiffRing, parse_poly
from toda_integrals.liedata import AlgebraSpec

GOLDEN = Path(__file__).parent / "golden"

_acceptance_lines: list[str] = []


def golden_poly(name: str, spec: str):
    ring = AlgebraSpec.parse(spec).ring()
    return parse_poly((GOLDEN / name).read_text(), ring)


@pytest.fixture
def a1():
    return AlgebraSpec.parse("A1").ring()


@pytest.fixture
def free2():
    return DiffRing(2)


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
