import functools

import pytest

from topquandle.braid import parse_braid
from topquandle.geometric import geometric_quandle
from topquandle.solver import SolveConfig, sample_solutions

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record a one-line verdict; all verdicts are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def log(number, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        print(line)
        lines.append(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def solved(word_text, selector, **overrides):
    """Cached cloud so several tests can share one expensive run."""
    config = SolveConfig(**overrides)
    return sample_solutions(parse_braid(word_text), geometric_quandle(selector), config)


@pytest.fixture(scope="session")
def solve():
    return solved
