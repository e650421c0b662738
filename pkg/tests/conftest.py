import pytest

from conpat.overlap import canonical_pattern_sets
from conpat.permcore import PatternSet

LEN3 = canonical_pattern_sets(3, 1)
LEN4 = canonical_pattern_sets(4, 1)

# canonical single patterns of length 3 and 4, plus {123, 321}, {2143} and a few mixed sets
BATTERY = LEN3 + LEN4 + [
    PatternSet([(1, 2, 3), (3, 2, 1)]),
    PatternSet([(2, 1, 4, 3)]),
]
MIXED = [
    PatternSet([(1, 2), (3, 2, 1)]),
    PatternSet([(1, 2, 3), (2, 4, 1, 3)]),
    PatternSet([(1, 3, 2), (1, 2, 3, 4)]),
    PatternSet([(1, 3, 2), (2, 1, 3), (1, 2, 3)]),
]


def ids(sets):
    return [str(B) for B in sets]


@pytest.fixture
def pair_123_321():
    return PatternSet([(1, 2, 3), (3, 2, 1)])


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome}  {name}")
