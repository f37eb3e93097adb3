"""Compiled episode loops must replay the reference loops bit for bit."""

import numpy as np
import pytest

import structbandit as sb
from structbandit.harness import run_episode
from structbandit.problems import Environment

CASES = [
    ("example-a", 0.04, "ucb", 2.0),
    ("example-a", 0.04, "ucbs", 4.0),
    ("example-a", -0.15, "ucbs", 4.0),
    ("example-b", 0.1, "ucbs", 4.0),
    ("example-c", -0.3, "ucbs", 4.0),
    ("example-d", 0.7, "ucbs", 4.0),
    ("example-e", 0.5, "ucbs", 4.0),
    ("example-f", 1.5, "ucb", 2.0),
    ("example-f", 4.2, "ucbs", 4.0),
    ("ambiguous-a", 0.0, "ucbs", 4.0),
    ("ambiguous-a", 0.0, "ucbs-ra", 4.0),
    ("ambiguous-a", 0.3, "ucbs-ra", 4.0),
    ("ambiguous-c", -0.2, "ucbs-ra", 4.0),
    ("ambiguous-a", 0.0, "phased", None),
    ("ambiguous-a", 0.6, "phased", None),
]


@pytest.mark.parametrize("problem,theta,policy,alpha", CASES)
def test_kernel_matches_reference(problem, theta, policy, alpha):
    bandit = sb.make_builtin(problem)
    horizon = 500
    cps = sb.geometric_checkpoints(horizon)
    for seed in (1, 2):
        fast = run_episode(
            Environment(bandit, theta, seed, stream=seed),
            policy, alpha, horizon, cps, use_kernel=True, record_arms=True,
        )
        slow = run_episode(
            Environment(bandit, theta, seed, stream=seed),
            policy, alpha, horizon, cps, use_kernel=False, record_arms=True,
        )
        np.testing.assert_array_equal(fast.arms, slow.arms)
        np.testing.assert_array_equal(fast.counts, slow.counts)
        np.testing.assert_array_equal(fast.violations, slow.violations)
        np.testing.assert_array_equal(fast.regret, slow.regret)


def test_violations_fire_identically_at_small_alpha():
    # a small exploration constant makes the failure event common enough to
    # exercise the flag on both paths
    bandit = sb.make_builtin("example-a")
    cps = (2, 5, 10, 25, 60)
    hits = 0
    for seed in range(6):
        fast = run_episode(
            Environment(bandit, 0.04, seed), "ucbs", 0.5, 60, cps, use_kernel=True
        )
        slow = run_episode(
            Environment(bandit, 0.04, seed), "ucbs", 0.5, 60, cps, use_kernel=False
        )
        np.testing.assert_array_equal(fast.violations, slow.violations)
        hits += int(fast.violations.sum())
    assert hits > 0


def test_kernel_capacity_guard():
    from structbandit._kernels import kernel_capacity_ok

    assert kernel_capacity_ok(sb.make_builtin("example-f"))
    box = sb.BoxSpace(((-1, 1),))
    b = sb.StructuredBandit(k=1, space=box, means=(sb.Coordinate(0),), sigma2=1.0)
    assert not kernel_capacity_ok(b)
