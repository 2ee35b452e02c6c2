import math

import mpmath
import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def oracle_sum(values, t):
    """(1/N) sum_j f_j exp(i t j / N) in 40-digit arithmetic."""
    with mpmath.workdps(40):
        n = len(values) - 1
        total = mpmath.mpc(0)
        for j, f in enumerate(values):
            total += mpmath.mpc(f.real, f.imag) * mpmath.expj(mpmath.mpf(j) * t / n)
        total /= n
        return complex(total)


def gaussian_samples(n):
    x = np.arange(n + 1) / n
    return np.exp(-((x - 0.5) ** 2) / 0.125)


def alternating_samples(n):
    return np.array([(-1.0) ** i for i in range(n + 1)])


@pytest.fixture
def pi():
    return math.pi


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", "") or rep.when != "call":
                continue
            props = dict(getattr(rep, "user_properties", ()))
            name = props.get("criterion", rep.nodeid.split("::")[-1])
            lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  criterion {name}")
