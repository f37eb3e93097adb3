"""Acceptance suite: one test per release criterion, at stated tolerances.

Each test prints a single [PASS]/[FAIL] line (visible with ``pytest -s`` or
in the captured output of a failing run) and enforces its runtime budget.
Statistical criteria use three-standard-error slack; tolerance values are
pinned here, not configurable.
"""

import math
import time

import numpy as np
import pytest

import structbandit as sb
from structbandit import ExperimentConfig, PolicySpec
from structbandit.cli import dispatch
from structbandit.harness import (
    concentration_check,
    read_table,
    run_experiment,
    violation_frequencies,
)
from structbandit.problems import ArmStatistics, Environment

from conftest import scan_omega, scan_omega2


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile the episode kernels once so runtime budgets measure the
    # algorithms, not first-call JIT latency
    for problem, theta, policy, alpha in (
        ("example-a", 0.1, "ucb", 2.0),
        ("example-a", 0.1, "ucbs", 4.0),
        ("ambiguous-a", 0.0, "ucbs-ra", 4.0),
        ("ambiguous-a", 0.0, "phased", None),
    ):
        env = Environment(sb.make_builtin(problem), theta, 0)
        sb.run_episode(env, policy, alpha, 8, (8,))


def test_criterion_01_omega_oracle_equivalence():
    t0 = time.time()
    xs = (0.5, 1.0, math.e, 5.0, 10.0, 16.0, 100.0, 1e4)
    mismatches = []
    for x in xs:
        if sb.omega(x) != scan_omega(x):
            mismatches.append(("omega", x))
        if sb.omega2(x) != scan_omega2(x):
            mismatches.append(("omega2", x))
    ok = not mismatches and sb.omega(10.0) == 36 and sb.omega(100.0) == 648
    elapsed = time.time() - t0
    report(
        "criterion-1 threshold-function oracle equivalence",
        ok and elapsed < 1.0,
        f"mismatches={mismatches} omega(10)={sb.omega(10.0)} "
        f"omega(100)={sb.omega(100.0)} elapsed={elapsed:.2f}s (budget 1s)",
    )


def test_criterion_02_concentration_bound():
    t0 = time.time()
    chk = concentration_check(epsilon=1.0, n=8, sigma2=1.0, trials=100_000, seed=0)
    limit = 0.03663 + 3.0 * math.sqrt(0.0366 * 0.9634 / 100_000)
    elapsed = time.time() - t0
    report(
        "criterion-2 sample-mean concentration",
        chk.frequency <= limit and elapsed < 10.0,
        f"freq={chk.frequency:.5f} <= {limit:.5f} elapsed={elapsed:.1f}s (budget 10s)",
    )


def test_criterion_03_confidence_failure_frequency():
    t0 = time.time()
    ts = (10, 50, 200)
    freqs = violation_frequencies(
        "example-a", 0.04, PolicySpec("ucbs", 4.0),
        episodes=10_000, horizon=200, ts=ts, seed=11,
    )
    k, alpha, episodes = 2, 4.0, 10_000
    checks = []
    for t, f in zip(ts, freqs):
        ceiling = 2.0 * k * t ** (1.0 - alpha)
        se = math.sqrt(max(f * (1.0 - f), 0.0) / episodes)
        checks.append((t, f, ceiling + 3 * se, f <= ceiling + 3 * se))
    elapsed = time.time() - t0
    report(
        "criterion-3 confidence-failure frequency",
        all(c[-1] for c in checks) and elapsed < 120.0,
        " ".join(f"t={t}:{f:.2e}<={lim:.2e}" for t, f, lim, _ in checks)
        + f" elapsed={elapsed:.0f}s (budget 120s)",
    )


def test_criterion_04_logarithmic_ceiling():
    t0 = time.time()
    cfg = ExperimentConfig(
        problem="example-a", horizon=10_000, reps=200, seed=2,
        policies=(PolicySpec("ucbs", 4.0),), theta=0.2, checkpoints=(10_000,),
    )
    curve = run_experiment(cfg).curves["ucbs"]
    bandit = sb.make_builtin("example-a")
    bound = sb.theorem1_bound(
        sb.BoundInputs(sb.gap_profile(bandit, 0.2), 10_000, 4.0, bandit.sigma2, 2)
    )
    limit = bound + 3 * curve.terminal_stderr
    elapsed = time.time() - t0
    report(
        "criterion-4 logarithmic regret ceiling",
        curve.terminal_mean <= limit and elapsed < 60.0,
        f"regret={curve.terminal_mean:.2f} <= {limit:.2f} elapsed={elapsed:.0f}s (budget 60s)",
    )


def test_criterion_05_finite_regret_behaviour():
    t0 = time.time()
    bandit = sb.make_builtin("example-a")
    theta = 0.04
    cps = (25_000, 50_000)
    cfg = ExperimentConfig(
        problem="example-a", horizon=50_000, reps=100, seed=3,
        policies=(PolicySpec("ucbs", 4.0), PolicySpec("ucb", 2.0)),
        theta=theta, checkpoints=cps,
    )
    res = run_experiment(cfg)
    ucbs, ucb = res.curves["ucbs"], res.curves["ucb"]

    eps = sb.finite_regret_epsilon(bandit, theta).epsilon
    prof = sb.gap_profile(bandit, theta)
    w = sb.omega_star(eps, prof.delta_min, 4.0, bandit.k, bandit.sigma2)
    bound = sb.theorem2_bound(prof, w, bandit.sigma2, bandit.k)
    ceiling_ok = ucbs.terminal_mean <= bound + 3 * ucbs.terminal_stderr

    inc_s = ucbs.mean_regret[-1] - ucbs.mean_regret[0]
    inc_u = ucb.mean_regret[-1] - ucb.mean_regret[0]
    flat_ok = inc_s <= 0.25 * inc_u
    elapsed = time.time() - t0
    report(
        "criterion-5 horizon-free regret behaviour",
        ceiling_ok and flat_ok and elapsed < 600.0,
        f"eps={eps:.3f} w*={w} regret={ucbs.terminal_mean:.2f} <= bound {bound:.0f}; "
        f"increment {inc_s:.2f} vs 25% of {inc_u:.2f}; elapsed={elapsed:.0f}s (budget 600s)",
    )


def test_criterion_06_classification_map():
    t0 = time.time()
    expectations = {
        "example-a": lambda th, lb: lb == "easy",
        "example-b": lambda th, lb: lb == ("hard" if th < 0 else "easy"),
        "example-c": lambda th, lb: lb == "easy",
        "ambiguous-a": lambda th, lb: lb == ("ambiguous" if th <= 0 else "easy"),
    }
    bad = []
    for name, expect in expectations.items():
        bandit = sb.make_builtin(name)
        grid = bandit.space.grid(201)
        for theta, res in zip(grid, sb.classify_many(bandit, grid)):
            if res is None:
                continue  # degenerate zero-gap point, excluded
            if not expect(float(theta), res.label):
                bad.append((name, float(theta), res.label))
    elapsed = time.time() - t0
    report(
        "criterion-6 parameter-space classification",
        not bad and elapsed < 5.0,
        f"mislabels={bad[:5]} count={len(bad)} elapsed={elapsed:.1f}s (budget 5s)",
    )


def test_criterion_07_phase_rule_bounded_regret():
    t0 = time.time()
    cps = (10_000, 100_000)
    cfg = ExperimentConfig(
        problem="ambiguous-a", horizon=100_000, reps=100, seed=4,
        policies=(PolicySpec("phased"),), theta=0.0, checkpoints=cps,
    )
    curve = run_experiment(cfg).curves["phased"]
    early, late = curve.mean_regret
    increment = late - early
    limit = 0.10 * early + 3 * curve.terminal_stderr
    elapsed = time.time() - t0
    report(
        "criterion-7 phase-rule regret plateau",
        increment <= limit and elapsed < 600.0,
        f"regret@1e4={early:.2f} increment={increment:.3f} <= {limit:.3f} "
        f"elapsed={elapsed:.0f}s (budget 600s)",
    )


def test_criterion_08_symmetric_floor_sanity():
    t0 = time.time()
    worst = 0.0
    for theta in (-0.1, 0.1):
        cfg = ExperimentConfig(
            problem="example-a", horizon=50_000, reps=200, seed=5,
            policies=(PolicySpec("ucbs", 4.0),), theta=theta, checkpoints=(50_000,),
        )
        worst = max(worst, run_experiment(cfg).curves["ucbs"].terminal_mean)
    floor = sb.symmetric_lower_bound(0.1)
    elapsed = time.time() - t0
    report(
        "criterion-8 mirrored-pair lower-bound sanity",
        worst >= floor == 1.25 and elapsed < 300.0,
        f"max regret={worst:.2f} >= {floor} elapsed={elapsed:.0f}s (budget 300s)",
    )


def test_criterion_09_determinism_and_format(tmp_path):
    t0 = time.time()
    paths = []
    for workers in (1, 8):
        out = tmp_path / f"sweep-w{workers}.txt"
        code = dispatch(
            ["reproduce", "fig-a-sweep", "--reps", "10", "--seed", "1",
             "--workers", str(workers), "--out", str(out)]
        )
        assert code == 0
        paths.append(out)
    identical = paths[0].read_bytes() == paths[1].read_bytes()

    headers, data = read_table(paths[0])
    reformatted_ok = True
    with open(paths[0]) as fh:
        body = [l.split() for l in fh if not l.startswith("#")]
    for row, parsed in zip(body, data):
        for cell, value in zip(row[1:], parsed[1:]):
            reformatted_ok &= f"{value:.6g}" == f"{float(cell):.6g}"
    elapsed = time.time() - t0
    report(
        "criterion-9 parallel determinism and table format",
        identical and reformatted_ok and data.shape == (41, 3) and elapsed < 300.0,
        f"byte-identical={identical} round-trip={reformatted_ok} shape={data.shape} "
        f"elapsed={elapsed:.0f}s (budget 300s)",
    )


def test_criterion_10_classic_reduction():
    t0 = time.time()
    box = sb.BoxSpace(((-10, 10), (-10, 10)))
    bandit = sb.StructuredBandit(
        k=2, space=box, means=(sb.Coordinate(0), sb.Coordinate(1)), sigma2=1.0
    )
    alpha = 4.0
    mismatches = 0
    truncations = 0
    for seed in range(20):
        env = Environment(bandit, (0.3, -0.3), seed)
        s1, s2 = ArmStatistics(2), ArmStatistics(2)
        for t in range(1, 1001):
            a_ucb = sb.ucb_select(s1, t, alpha, 1.0)
            a_ucbs = sb.ucbs_select(bandit, s2, t, alpha)
            if a_ucb != a_ucbs:
                mismatches += 1
            for i in range(2):  # verify no box edge truncates the index
                if s1.counts[i] > 0:
                    upper = s1.means[i] + sb.confidence_radius(
                        t, int(s1.counts[i]), alpha, 1.0
                    )
                    if upper >= 10.0:
                        truncations += 1
            x = env.draw(a_ucb)
            s1.record(a_ucb, x)
            s2.record(a_ucbs, x)
    elapsed = time.time() - t0
    report(
        "criterion-10 classic-bandit reduction",
        mismatches == 0 and truncations == 0 and elapsed < 10.0,
        f"mismatched steps={mismatches} truncations={truncations} "
        f"elapsed={elapsed:.1f}s (budget 10s)",
    )
