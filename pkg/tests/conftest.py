import itertools

import pytest

from stripsort import Permutation


def all_perms(n):
    return [Permutation(s) for s in itertools.permutations(range(1, n + 1))]


@pytest.fixture(scope="session")
def s5():
    return all_perms(5)


@pytest.fixture(scope="session")
def s6():
    return all_perms(6)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
