"""Arm-selection rules.

Four policies share one statistics object (:class:`ArmStatistics`):

* ``ucb``      classic optimism on per-arm upper confidence bounds,
* ``ucbs``     structured optimism: maximise each arm's best plausible mean
  over the parameters consistent with every confidence interval,
* ``ucbs-ra``  structured optimism plus a commitment bonus toward arms that
  are optimal somewhere in the marked ambiguous region,
* ``phased``   the two-arm phase-based rule with forced sampling blocks.

Confidence radii everywhere are sqrt(2*alpha*sigma2*log(t)/T_i); the
plausible-parameter set uses strict inequalities and leaves unsampled arms
unconstrained.  Ties in any argmax go to the lowest arm index.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .problems import ArmStatistics, StructuredBandit
from .spaces import BoxSpace, FiniteSpace, IntervalSpace

PHASED_ALPHA = 5.0


def confidence_radius(t: int, pulls: int, alpha: float, sigma2: float) -> float:
    """Half-width of the per-arm confidence interval; +inf for unsampled arms."""
    if t < 1:
        raise ValueError("t must be at least 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if sigma2 < 0:
        raise ValueError("sigma2 must be nonnegative")
    if pulls == 0:
        return math.inf
    return math.sqrt(2.0 * alpha * sigma2 * math.log(t) / pulls)


# ---------------------------------------------------------------------------
# plausible-parameter sets
# ---------------------------------------------------------------------------


def _band_preimage(segments, blo: float, bhi: float):
    """Closed theta-intervals where a piecewise-linear arm lies in (blo, bhi)."""
    out = []
    for x0, x1, y0, y1 in segments:
        if y0 == y1:
            if blo < y0 < bhi:
                out.append((x0, x1))
            continue
        slope = (y1 - y0) / (x1 - x0)
        ta = x0 + (blo - y0) / slope
        tb = x0 + (bhi - y0) / slope
        if ta > tb:
            ta, tb = tb, ta
        a = max(x0, ta)
        b = min(x1, tb)
        if a <= b:
            out.append((a, b))
    return out


def _intersect_intervals(first, second):
    out = []
    for a0, b0 in first:
        for a1, b1 in second:
            a = max(a0, a1)
            b = min(b0, b1)
            if a <= b:
                out.append((a, b))
    return out


def _sup_on_intervals(segments, intervals) -> float:
    best = -math.inf
    for a, b in intervals:
        for x0, x1, y0, y1 in segments:
            c = max(a, x0)
            d = min(b, x1)
            if c <= d:
                va = y0 + (c - x0) * (y1 - y0) / (x1 - x0)
                vb = y0 + (d - x0) * (y1 - y0) / (x1 - x0)
                if va > best:
                    best = va
                if vb > best:
                    best = vb
    return best


@dataclass
class ConfidenceSet:
    """Per-arm confidence intervals plus the induced plausible parameters.

    Exactly one of ``points`` (finite/grid spaces), ``intervals`` (exact
    piecewise-linear mode) or ``box`` (product-box spaces) is populated.
    Membership is always the pointwise strict test, independent of the
    stored representation.
    """

    bandit: StructuredBandit
    t: int
    centers: np.ndarray
    radii: np.ndarray
    points: tuple | None = None
    intervals: tuple | None = None
    box: tuple | None = None

    @property
    def empty(self) -> bool:
        if self.points is not None:
            return len(self.points) == 0
        if self.intervals is not None:
            return len(self.intervals) == 0
        return any(a > b for a, b in self.box)

    def contains(self, theta) -> bool:
        for i in range(self.bandit.k):
            r = self.radii[i]
            if math.isinf(r):
                continue
            if not abs(self.bandit.means[i](theta) - self.centers[i]) < r:
                return False
        return True

    def sup_mean(self, arm: int) -> float:
        """Best plausible mean of ``arm``; -inf when the set is empty."""
        mu = self.bandit.means[arm - 1]
        if self.points is not None:
            if not self.points:
                return -math.inf
            return max(mu(p) for p in self.points)
        if self.intervals is not None:
            return _sup_on_intervals(mu.segments(), self.intervals)
        lo, hi = self.box[mu.axis]
        return -math.inf if lo > hi else hi


def plausible_parameters(
    bandit: StructuredBandit,
    stats: ArmStatistics,
    t: int,
    alpha: float,
    mode: str = "auto",
    resolution: int | None = None,
) -> ConfidenceSet:
    """Parameters consistent with every sampled arm's confidence interval.

    ``mode`` picks the representation for interval spaces: ``"exact"``
    intersects piecewise-linear band preimages, ``"grid"`` enumerates the
    space's grid.  ``"auto"`` uses exact whenever the means allow it.
    """
    k = bandit.k
    centers = np.full(k, np.nan)
    radii = np.full(k, math.inf)
    for i in range(k):
        c = int(stats.counts[i])
        if c > 0:
            centers[i] = stats.means[i]
            radii[i] = confidence_radius(t, c, alpha, bandit.sigma2)

    space = bandit.space
    cs = ConfidenceSet(bandit, t, centers, radii)

    if isinstance(space, BoxSpace):
        box = [list(b) for b in space.bounds]
        for i in range(k):
            if math.isinf(radii[i]):
                continue
            axis = bandit.means[i].axis
            box[axis][0] = max(box[axis][0], centers[i] - radii[i])
            box[axis][1] = min(box[axis][1], centers[i] + radii[i])
        cs.box = tuple((a, b) for a, b in box)
        return cs

    if isinstance(space, FiniteSpace) or (
        isinstance(space, IntervalSpace) and mode == "grid"
    ) or (mode == "auto" and not bandit.is_piecewise_linear):
        pts = space.grid(resolution)
        keep = [p for p in pts if cs.contains(p)]
        cs.points = tuple(keep)
        return cs

    if not isinstance(space, IntervalSpace):
        raise ValueError(f"unsupported space {type(space).__name__}")

    current = [(space.lower, space.upper)]
    for i in range(k):
        if math.isinf(radii[i]):
            continue
        pre = _band_preimage(
            bandit.means[i].segments(), centers[i] - radii[i], centers[i] + radii[i]
        )
        current = _intersect_intervals(current, pre)
        if not current:
            break
    cs.intervals = tuple(current)
    return cs


# ---------------------------------------------------------------------------
# selection rules
# ---------------------------------------------------------------------------


def _least_pulled(stats: ArmStatistics) -> int:
    return int(np.argmin(stats.counts)) + 1


def ucb_select(stats: ArmStatistics, t: int, alpha: float, sigma2: float) -> int:
    """Classic index rule; unsampled arms are forced first, lowest index."""
    for i in range(stats.k):
        if stats.counts[i] == 0:
            return i + 1
    best, best_val = 1, -math.inf
    for i in range(stats.k):
        v = stats.means[i] + confidence_radius(t, int(stats.counts[i]), alpha, sigma2)
        if v > best_val:
            best, best_val = i + 1, v
    return best


def ucbs_select(
    bandit: StructuredBandit,
    stats: ArmStatistics,
    t: int,
    alpha: float,
    mode: str = "auto",
    resolution: int | None = None,
) -> int:
    """Optimistic arm over the plausible set; least-pulled arm when empty."""
    cs = plausible_parameters(bandit, stats, t, alpha, mode, resolution)
    if cs.empty:
        return _least_pulled(stats)
    best, best_val = 1, -math.inf
    for arm in range(1, bandit.k + 1):
        v = cs.sup_mean(arm)
        if v > best_val:
            best, best_val = arm, v
    return best


@dataclass(frozen=True)
class RiskAverseState:
    """Commitment state: 0 means uncommitted, else the committed arm."""

    kappa: int = 0


def commitment_bonus_scale(t: int) -> float:
    """log(log(t)), evaluated at max(t, 3) and floored at zero."""
    return max(0.0, math.log(math.log(max(t, 3))))


def _first_ambiguous_point(cs: ConfidenceSet, space) -> object | None:
    """Lowest enumerated member of (plausible set ∩ ambiguous marks)."""
    if cs.points is not None:
        for p in cs.points:
            if space.is_ambiguous(p):
                return p
        return None
    for a, b in cs.intervals:
        best = math.inf
        for m0, m1 in space.ambiguous:
            lo = max(a, m0)
            hi = min(b, m1)
            if lo <= hi and lo < best:
                best = lo
        if best < math.inf:
            return best
    return None


def ucbs_ra_select(
    bandit: StructuredBandit,
    stats: ArmStatistics,
    state: RiskAverseState,
    t: int,
    alpha: float,
    mode: str = "auto",
    resolution: int | None = None,
) -> tuple[int, RiskAverseState]:
    """Risk-averse selection: commit to the arm optimal at the first plausible
    ambiguous parameter, bonus it while it keeps winning, drop it otherwise."""
    space = bandit.space
    if not getattr(space, "ambiguous", None):
        raise ValueError("risk-averse selection needs ambiguous marks on the space")
    cs = plausible_parameters(bandit, stats, t, alpha, mode, resolution)

    kappa = state.kappa
    if kappa == 0 and not cs.empty:
        pick = _first_ambiguous_point(cs, space)
        if pick is not None:
            mus = bandit.mean_vector(pick)
            kappa = int(np.argmax(mus)) + 1

    if cs.empty:
        arm = _least_pulled(stats)
        return arm, RiskAverseState(kappa if arm == kappa else 0)

    beta = commitment_bonus_scale(t)
    best, best_val = 1, -math.inf
    for arm in range(1, bandit.k + 1):
        v = cs.sup_mean(arm)
        if arm == kappa:
            pulls = int(stats.counts[arm - 1])
            if pulls == 0:
                v = math.inf
            else:
                v += math.sqrt(beta * math.log(t) / pulls)
        if v > best_val:
            best, best_val = arm, v
    return best, RiskAverseState(kappa if best == kappa else 0)


# ---------------------------------------------------------------------------
# phase-based two-arm rule
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhasedState:
    """State machine position for the phase-based rule.

    Each phase forces 2^ell pulls of arm 1 then ell^2 pulls of arm 2, then
    runs one arm until its within-phase mean crosses its threshold.  Means
    are tracked per phase only.
    """

    ell: int = 2
    mode: str = "force1"
    count1: int = 0
    count2: int = 0
    sum1: float = 0.0
    sum2: float = 0.0
    last_arm: int | None = None

    @property
    def forced1(self) -> int:
        return 2**self.ell

    @property
    def forced2(self) -> int:
        return self.ell**2


def _run1_threshold(count: int) -> float:
    return -math.sqrt(PHASED_ALPHA * math.log(math.log(count)) / count)


def phased_step(
    state: PhasedState, last_reward: float | None
) -> tuple[int, PhasedState]:
    """Feed the previous reward (None on the first call), get the next arm."""
    st = state
    if (st.last_arm is None) != (last_reward is None):
        raise ValueError("last_reward must match the previously returned arm")
    if last_reward is not None:
        if st.last_arm == 1:
            st = _replace(st, count1=st.count1 + 1, sum1=st.sum1 + last_reward)
        else:
            st = _replace(st, count2=st.count2 + 1, sum2=st.sum2 + last_reward)

    while True:
        if st.mode == "force1":
            if st.count1 < st.forced1:
                return 1, _replace(st, last_arm=1)
            st = _replace(st, mode="force2")
        elif st.mode == "force2":
            if st.count2 < st.forced2:
                return 2, _replace(st, last_arm=2)
            mean1 = st.sum1 / st.count1
            mean2 = st.sum2 / st.count2
            if mean1 >= _run1_threshold(st.count1) and mean2 < -0.5:
                st = _replace(st, mode="run1")
            else:
                st = _replace(st, mode="run2")
        elif st.mode == "run1":
            if st.sum1 / st.count1 >= _run1_threshold(st.count1):
                return 1, _replace(st, last_arm=1)
            st = PhasedState(ell=st.ell + 1)
        else:  # run2
            if st.sum2 / st.count2 >= -0.5:
                return 2, _replace(st, last_arm=2)
            st = PhasedState(ell=st.ell + 1)


def _replace(st: PhasedState, **kw) -> PhasedState:
    return dataclasses.replace(st, **kw)


# ---------------------------------------------------------------------------
# policy objects for the episode loop
# ---------------------------------------------------------------------------

DEFAULT_ALPHA = {"ucb": 2.0, "ucbs": 4.0, "ucbs-ra": 4.0}
POLICY_NAMES = ("ucb", "ucbs", "ucbs-ra", "phased")


class UcbPolicy:
    name = "ucb"

    def __init__(self, bandit: StructuredBandit, alpha: float = 2.0):
        self.bandit = bandit
        self.alpha = alpha

    def select(self, stats: ArmStatistics, t: int) -> int:
        return ucb_select(stats, t, self.alpha, self.bandit.sigma2)

    def observe(self, arm: int, reward: float) -> None:
        pass


class UcbsPolicy:
    name = "ucbs"

    def __init__(self, bandit: StructuredBandit, alpha: float = 4.0, mode: str = "auto"):
        self.bandit = bandit
        self.alpha = alpha
        self.mode = mode

    def select(self, stats: ArmStatistics, t: int) -> int:
        return ucbs_select(self.bandit, stats, t, self.alpha, self.mode)

    def observe(self, arm: int, reward: float) -> None:
        pass


class RiskAverseUcbsPolicy:
    name = "ucbs-ra"

    def __init__(self, bandit: StructuredBandit, alpha: float = 4.0, mode: str = "auto"):
        self.bandit = bandit
        self.alpha = alpha
        self.mode = mode
        self.state = RiskAverseState()

    def select(self, stats: ArmStatistics, t: int) -> int:
        arm, self.state = ucbs_ra_select(
            self.bandit, stats, self.state, t, self.alpha, self.mode
        )
        return arm

    def observe(self, arm: int, reward: float) -> None:
        pass


class PhasedPolicy:
    name = "phased"
    alpha = PHASED_ALPHA

    def __init__(self, bandit: StructuredBandit):
        if bandit.k != 2:
            raise ValueError("the phase-based rule needs exactly two arms")
        self.bandit = bandit
        self.state = PhasedState()
        self._pending: float | None = None

    def select(self, stats: ArmStatistics, t: int) -> int:
        arm, self.state = phased_step(self.state, self._pending)
        self._pending = None
        return arm

    def observe(self, arm: int, reward: float) -> None:
        self._pending = reward


def make_policy(name: str, bandit: StructuredBandit, alpha: float | None = None):
    """Instantiate a policy by identifier, applying per-policy default alpha."""
    if name == "phased":
        if alpha is not None:
            raise ValueError("the phased rule has a fixed exploration constant")
        return PhasedPolicy(bandit)
    if name not in DEFAULT_ALPHA:
        raise ValueError(f"unknown policy {name!r} (known: {', '.join(POLICY_NAMES)})")
    a = DEFAULT_ALPHA[name] if alpha is None else float(alpha)
    if name == "ucb":
        return UcbPolicy(bandit, a)
    if name == "ucbs":
        return UcbsPolicy(bandit, a)
    return RiskAverseUcbsPolicy(bandit, a)
