import itertools

import numpy as np
import pytest

from mprcodes.core import ScheduleMatrix

_ACCEPTANCE = []


def all_matrices(t_max, n_max, t_min=0):
    """Every t x n binary matrix with t_min <= t <= t_max, 1 <= n <= n_max."""
    for n in range(1, n_max + 1):
        for t in range(t_min, t_max + 1):
            for rows in itertools.product(range(2 ** n), repeat=t):
                yield ScheduleMatrix(t, n, rows)


def random_matrices(count, t_max, n_max, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        t = int(rng.integers(1, t_max + 1))
        n = int(rng.integers(1, n_max + 1))
        p = rng.uniform(0.05, 0.95)
        bits = rng.random((t, n)) < p
        rows = tuple(int(sum(1 << j for j in range(n) if bits[i, j])) for i in range(t))
        yield ScheduleMatrix(t, n, rows)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        _ACCEPTANCE.append((number, title, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}")
