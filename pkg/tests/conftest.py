import sys

import pytest

from gen import BASIC, LISTS, LISTTREE
from lptypes.decision import TypeEnv
from lptypes.parser import parse_type


@pytest.fixture
def basic():
    return BASIC


@pytest.fixture
def basic_env():
    return TypeEnv(BASIC)


@pytest.fixture
def T():
    return lambda s: parse_type(s, BASIC)


@pytest.fixture
def lists():
    return LISTS


@pytest.fixture
def listtree():
    return LISTTREE


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
