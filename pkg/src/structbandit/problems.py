"""Structured bandit problems, reward sampling, and per-arm statistics.

A problem is K arms whose expected returns are known functions of one shared
unknown parameter.  An :class:`Environment` fixes the true parameter and an
RNG seed, turning the problem into a reproducible reward process.  Arms are
numbered 1..K in every public signature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .means import Coordinate, PiecewiseLinear, Tabulated
from .rng import GaussianStream
from .spaces import BoxSpace, FiniteSpace, IntervalSpace


@dataclass(frozen=True)
class StructuredBandit:
    k: int
    space: object
    means: tuple
    sigma2: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(self.means))
        if self.k < 1:
            raise ValueError("need at least one arm")
        if len(self.means) != self.k:
            raise ValueError(f"expected {self.k} mean functions, got {len(self.means)}")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")
        self._check_domains()

    def _check_domains(self):
        space = self.space
        for i, mu in enumerate(self.means, start=1):
            if isinstance(space, IntervalSpace):
                if not isinstance(mu, PiecewiseLinear):
                    raise ValueError(f"arm {i}: interval spaces need piecewise-linear means")
                lo, hi = mu.domain
                if lo > space.lower or hi < space.upper:
                    raise ValueError(f"arm {i}: mean not defined on the whole space")
            elif isinstance(space, FiniteSpace):
                if not isinstance(mu, Tabulated):
                    raise ValueError(f"arm {i}: finite spaces need tabulated means")
                missing = set(space.labels) - set(mu.values)
                if missing:
                    raise ValueError(f"arm {i}: no value for labels {sorted(missing)}")
            elif isinstance(space, BoxSpace):
                if not isinstance(mu, Coordinate):
                    raise ValueError(f"arm {i}: box spaces need coordinate means")
                if not 0 <= mu.axis < space.dims:
                    raise ValueError(f"arm {i}: coordinate axis {mu.axis} outside box")
            else:
                raise ValueError(f"unsupported space type {type(space).__name__}")

    def mean(self, arm: int, theta) -> float:
        return evaluate_mean(self, arm, theta)

    def mean_vector(self, theta) -> np.ndarray:
        return np.array([mu(theta) for mu in self.means], dtype=np.float64)

    def value_range(self) -> tuple[float, float]:
        """Envelope of every arm's values (used for scale-aware tolerances)."""
        los, his = zip(*(mu.value_range() for mu in self.means))
        return (min(los), max(his))

    @property
    def is_piecewise_linear(self) -> bool:
        return isinstance(self.space, IntervalSpace) and all(
            isinstance(mu, PiecewiseLinear) for mu in self.means
        )


def _check_arm(bandit: StructuredBandit, arm: int) -> None:
    if not 1 <= arm <= bandit.k:
        raise ValueError(f"arm {arm} out of range 1..{bandit.k}")


def evaluate_mean(bandit: StructuredBandit, arm: int, theta) -> float:
    """Expected return of ``arm`` (1-based) at parameter ``theta``."""
    _check_arm(bandit, arm)
    if not bandit.space.contains(theta):
        raise ValueError(f"parameter {theta!r} outside the space")
    return bandit.means[arm - 1](theta)


@dataclass(frozen=True)
class GapProfile:
    """Per-arm regret-per-pull at a fixed parameter.

    ``delta_min`` is None when every arm is optimal (no suboptimal arm).
    """

    optimal_arm: int
    optimal_mean: float
    gaps: np.ndarray
    delta_min: float | None
    delta_max: float
    suboptimal: tuple[int, ...]

    def gap(self, arm: int) -> float:
        return float(self.gaps[arm - 1])


def gap_profile(bandit: StructuredBandit, theta) -> GapProfile:
    """Gaps, optimal arm (lowest index on ties), and the suboptimal set."""
    if not bandit.space.contains(theta):
        raise ValueError(f"parameter {theta!r} outside the space")
    mus = bandit.mean_vector(theta)
    star = float(np.max(mus))
    gaps = star - mus
    suboptimal = tuple(int(i) + 1 for i in np.nonzero(gaps > 0)[0])
    return GapProfile(
        optimal_arm=int(np.argmax(mus)) + 1,
        optimal_mean=star,
        gaps=gaps,
        delta_min=float(min(gaps[i - 1] for i in suboptimal)) if suboptimal else None,
        delta_max=float(np.max(gaps)),
        suboptimal=suboptimal,
    )


class ArmStatistics:
    """Pull counts, running sums and running means; the policy-facing state."""

    def __init__(self, k: int):
        self.k = k
        self.counts = np.zeros(k, dtype=np.int64)
        self.sums = np.zeros(k, dtype=np.float64)
        self.means = np.zeros(k, dtype=np.float64)
        self.t = 0

    def record(self, arm: int, reward: float) -> None:
        i = arm - 1
        self.counts[i] += 1
        self.sums[i] += reward
        self.means[i] = self.sums[i] / self.counts[i]
        self.t += 1

    def pulls(self, arm: int) -> int:
        return int(self.counts[arm - 1])

    def mean(self, arm: int) -> float:
        if self.counts[arm - 1] == 0:
            raise ValueError(f"arm {arm} has no samples")
        return float(self.means[arm - 1])

    def copy(self) -> "ArmStatistics":
        out = ArmStatistics(self.k)
        out.counts[:] = self.counts
        out.sums[:] = self.sums
        out.means[:] = self.means
        out.t = self.t
        return out


class Environment:
    """A problem instance with its true parameter and deterministic rewards.

    ``stream`` separates replications: replication r of an experiment runs on
    stream r of the same base seed.  Rewards for arm a come from the
    ``(seed, stream, a)`` Gaussian stream (see :mod:`structbandit.rng`), so
    the s-th pull of an arm yields the same value in every policy and every
    execution plan.
    """

    def __init__(self, bandit: StructuredBandit, theta_star, rng_seed: int, stream: int = 0):
        if not bandit.space.contains(theta_star):
            raise ValueError(f"theta_star {theta_star!r} outside the space")
        self.bandit = bandit
        self.theta_star = theta_star
        self.rng_seed = int(rng_seed)
        self.stream = int(stream)
        self.true_means = bandit.mean_vector(theta_star)
        self.sigma = float(np.sqrt(bandit.sigma2))
        self._streams = [None] * bandit.k

    def _stream_for(self, arm: int) -> GaussianStream:
        i = arm - 1
        if self._streams[i] is None:
            self._streams[i] = GaussianStream(self.rng_seed, self.stream, i)
        return self._streams[i]

    def draw(self, arm: int) -> float:
        """Next reward of ``arm`` without recording it anywhere."""
        _check_arm(self.bandit, arm)
        mu = float(self.true_means[arm - 1])
        if self.sigma == 0.0:
            return mu
        return mu + self.sigma * self._stream_for(arm).draw_one()

    def reward_matrix(self, horizon: int) -> np.ndarray:
        """Rewards[a-1, s] = s-th reward of arm a; feeds the fast kernels.

        Only valid on a fresh environment (no draws consumed yet).
        """
        out = np.empty((self.bandit.k, horizon), dtype=np.float64)
        for i in range(self.bandit.k):
            if self.sigma == 0.0:
                out[i] = self.true_means[i]
            else:
                z = GaussianStream(self.rng_seed, self.stream, i).draw(horizon)
                out[i] = self.true_means[i] + self.sigma * z
        return out


def sample_reward(env: Environment, arm: int, stats: ArmStatistics) -> float:
    """Draw the next reward of ``arm`` and append it to ``stats``."""
    x = env.draw(arm)
    stats.record(arm, x)
    return x
