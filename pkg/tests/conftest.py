"""Shared fixtures and independent oracles for the test suite."""


import numpy as np
import pytest

import structbandit as sb


def scan_omega(x: float) -> int:
    """Brute-force threshold scan: integer sweep plus fine real verification.

    Independent of the closed-form root implementation under test.
    """

    def f(z):
        return z - x * np.log(z)

    hi = 16.0
    while f(hi) < 8.0:
        hi *= 2.0
    ints = np.arange(1.0, hi + 1.0)
    bad = ints[f(ints) < 0]
    cand = 1 if bad.size == 0 else int(bad[-1]) + 1
    if cand > 1:
        below = np.linspace(cand - 1, cand, 200_001)[:-1]
        assert np.any(f(below) < 0)
    above = np.linspace(cand, max(cand + 4.0, 4.0 * x), 400_001)
    assert np.all(f(above) >= 0)
    return cand


def scan_omega2(x: float) -> int:
    def f(z):
        return z - x * np.log(np.log(z))

    hi = 16.0
    while f(hi) < 8.0:
        hi *= 2.0
    ints = np.arange(3.0, hi + 1.0)
    bad = ints[f(ints) < 0]
    cand = 3 if bad.size == 0 else max(3, int(bad[-1]) + 1)
    if cand > 3:
        below = np.linspace(cand - 1, cand, 200_001)[:-1]
        assert np.any(f(below) < 0)
    above = np.linspace(cand, max(cand + 4.0, 4.0 * x), 400_001)
    assert np.all(f(above) >= 0)
    return cand


@pytest.fixture(scope="session")
def example_a():
    return sb.make_builtin("example-a")


@pytest.fixture(scope="session")
def example_b():
    return sb.make_builtin("example-b")


@pytest.fixture(scope="session")
def example_c():
    return sb.make_builtin("example-c")


@pytest.fixture(scope="session")
def ambiguous_a():
    return sb.make_builtin("ambiguous-a")


def finite_two_point():
    """Two labelled parameters: arm-1 mean 0 at both, arm-2 mean +/-1."""
    space = sb.FiniteSpace(("A", "B"))
    return sb.StructuredBandit(
        k=2,
        space=space,
        means=(sb.Tabulated({"A": 0.0, "B": 0.0}), sb.Tabulated({"A": 1.0, "B": -1.0})),
        sigma2=1.0,
    )


def stats_from(counts, means):
    """Build arm statistics in a prescribed state."""
    stats = sb.ArmStatistics(len(counts))
    stats.counts[:] = counts
    stats.means[:] = means
    stats.sums[:] = np.asarray(counts) * np.asarray(means)
    stats.t = int(np.sum(counts))
    return stats
