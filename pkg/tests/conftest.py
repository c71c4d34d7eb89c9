import pytest

from heatfuzz.fuzzy import Universe, build_partition
from heatfuzz.inference import consequent_centers
from heatfuzz.rules import FuzzyRule, RuleBase

# Extremes of the growth-room observations.
RH_BOUNDS = (68.0, 84.0)
T_BOUNDS = (23.0, 26.0)
HI_BOUNDS = (23.34, 25.70)

# Final rule set reported for the growth-room data.
TABLE4 = [
    ("high", "low", "low", 0.816537),
    ("high", "mid", "mid", 0.586294),
    ("low", "mid", "mid", 0.671715),
    ("mid", "high", "high", 0.534828),
    ("mid", "low", "low", 0.936416),
    ("mid", "mid", "mid", 0.643347),
]


@pytest.fixture
def partitions():
    return tuple(build_partition(Universe(*b)) for b in (RH_BOUNDS, T_BOUNDS, HI_BOUNDS))


def make_rulebase(rules, parts, centers=None):
    return RuleBase(
        rules=tuple(FuzzyRule(*r) for r in rules),
        rh=parts[0],
        t=parts[1],
        hi=parts[2],
        centers=centers or consequent_centers(parts[2].universe),
    )


@pytest.fixture
def table4_rulebase(partitions):
    return make_rulebase(TABLE4, partitions)


# One pass/fail line per acceptance criterion in the terminal summary.
_acceptance_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
