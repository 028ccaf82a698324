import numpy as np
import pytest

from it2fuzzy.demo import demo_it2_system, demo_t1_system
from it2fuzzy.rulebase import CrispConstant, FuzzySystem, InputVariable, Rule
from it2fuzzy.sets import TrapezoidIT2


@pytest.fixture
def demo_t1():
    return demo_t1_system()


@pytest.fixture
def demo_it2():
    return demo_it2_system()


def hole_system(umf_a, umf_b):
    """1-input IT2 system whose step-edged LMFs are 0.6 on [0, 0.4] and [0.6, 1]."""
    a = TrapezoidIT2(*umf_a, 0.0, 0.0, 0.4, 0.4, 0.6, name="A")
    b = TrapezoidIT2(*umf_b, 0.6, 1.0, 1.0, 1.0, 0.6, name="B")
    return FuzzySystem([InputVariable("x", 0.0, 1.0)],
                       [Rule([a], CrispConstant(0.0)), Rule([b], CrispConstant(1.0))],
                       kind="it2")


@pytest.fixture
def lmf_hole_system():
    # UMFs overlap on (0.2, 0.8), so only the LMFs leave (0.4, 0.6) uncovered
    return hole_system((0.0, 0.0, 0.4, 0.8), (0.2, 0.6, 1.0, 1.0))


@pytest.fixture
def umf_hole_system():
    return hole_system((0.0, 0.0, 0.4, 0.45), (0.55, 0.6, 1.0, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.failed:
        _criteria[name] = "failed"
    elif report.when == "call":
        _criteria.setdefault(name, "passed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        verdict = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
