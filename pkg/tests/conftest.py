import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from unicore.examples import load_instance, load_match  # noqa: E402


@pytest.fixture(scope="session")
def ex1():
    return load_instance("EX1")


@pytest.fixture(scope="session")
def ex1_strict():
    return load_instance("EX1-STRICT")


@pytest.fixture(scope="session")
def ex1_coarse():
    return load_instance("EX1-COARSE")


@pytest.fixture(scope="session")
def ex2():
    return load_instance("EX2")


@pytest.fixture(scope="session")
def mu_gs():
    return load_match("GS")


@pytest.fixture(scope="session")
def mu_uc():
    return load_match("UC")


@pytest.fixture(scope="session")
def mu_rtz():
    return load_match("RTZ")


@pytest.fixture(scope="session")
def mu_da():
    return load_match("DA")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            for name, value in getattr(rep, "user_properties", []):
                if name == "criterion":
                    lines.append((value, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for value, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {value}")
