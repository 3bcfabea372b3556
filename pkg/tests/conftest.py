import math

import pytest

from robustzero import catalog, char_poly, constant

PI = math.pi


@pytest.fixture(scope="session")
def mu():
    return catalog.mu()


@pytest.fixture(scope="session")
def phi(mu):
    return char_poly(mu)


@pytest.fixture(scope="session")
def psi():
    return catalog.psi()


@pytest.fixture(scope="session")
def one():
    return constant(2)


# (criterion number, title, passed, detail) recorded by tests/test_acceptance.py
ACCEPTANCE_LOG: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE_LOG):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}")
