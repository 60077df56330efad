import sys

import pytest

from bayes_skeptic.ingest import bundled_pi_digits, digits_to_moves


@pytest.fixture(scope="session")
def pi_digits():
    return bundled_pi_digits()


@pytest.fixture(scope="session")
def pi_moves(pi_digits):
    return digits_to_moves(pi_digits)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    if module is not None and module.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in module.REPORT:
            terminalreporter.write_line(line)
