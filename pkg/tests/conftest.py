from __future__ import annotations

import pytest

from spack.census import enumerate_up_to
from spack.families import load_registry

# Acceptance outcomes recorded by tests/test_acceptance.py, echoed in the summary.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def small_connected():
    """All connected graphs of order <= 7, one per isomorphism class."""
    return list(enumerate_up_to(7))


@pytest.fixture(scope="session")
def connected_up_to_8():
    return list(enumerate_up_to(8))


@pytest.fixture(scope="session")
def registry():
    return load_registry()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
