import math

import numpy as np
import pytest

from conecut.profiles import make_profile


@pytest.fixture
def cone():
    return make_profile("cone", 1.0, 1.0)


@pytest.fixture
def cylinder():
    return make_profile("cylinder", 1.0, 1.0)


@pytest.fixture
def paraboloid():
    return make_profile("paraboloid", 1.0, 1.0)


def random_monotone_samples(rng: np.random.Generator, decreasing: bool | None = None):
    """Random monotone (z, r) table spanning [0, H]."""
    m = int(rng.integers(2, 12))
    H = float(rng.uniform(0.2, 5.0))
    inner = np.sort(rng.uniform(0, H, size=m - 2))
    zs = np.concatenate([[0.0], inner, [H]])
    if np.any(np.diff(zs) <= 0):
        zs = np.linspace(0.0, H, m)
    rs = np.sort(rng.uniform(0, 3.0, size=m))
    if decreasing is None:
        decreasing = bool(rng.integers(2))
    if decreasing:
        rs = rs[::-1]
    # keep the two ends distinct so the telescoped gap is non-zero
    if rs[0] == rs[-1]:
        rs[0] += 0.5
    return list(zip(zs.tolist(), rs.tolist()))


def brute_stack_volume(r, H, n, mode):
    """Plain-loop cylinder stack volume from a scalar radius function."""
    h = H / n
    total = 0.0
    for i in range(n):
        a, b = r(i * h), r(min((i + 1) * h, H))
        rad = min(a, b) if mode == "inscribed" else max(a, b)
        total += math.pi * rad * rad * h
    return total


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::" in getattr(rep, "nodeid", "") and rep.when == "call":
                lines.append((rep.nodeid.split("::")[-1], outcome.upper()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if status == 'PASSED' else 'FAIL'}  {name}")
