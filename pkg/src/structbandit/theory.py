"""Closed-form regret bounds, threshold functions, and parameter classification.

Everything here is a pure function of its inputs.  The two threshold
functions solve implicit inequalities:

* ``omega(x)``  = least natural y such that z >= x*log(z) for every real z >= y,
* ``omega2(x)`` = least natural y above e such that z >= x*log(log(z)) for
  every real z >= y.

Both are computed by bracketed bisection on the boundary equation followed
by an exact integer verification step, so the returned integer satisfies the
defining inequality and its predecessor does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .means import PiecewiseLinear
from .problems import ArmStatistics, GapProfile, StructuredBandit, gap_profile
from .spaces import FiniteSpace, IntervalSpace

_E = math.e


def _largest_root(f, lo: float, hi: float, iters: int = 200) -> float:
    """Bisect for the root of increasing ``f`` with f(lo) < 0 <= f(hi)."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * max(1.0, abs(hi)):
            break
    return hi


def omega(x: float) -> int:
    """Least natural y with z >= x*log(z) for all real z >= y."""
    if x <= 0:
        raise ValueError("omega requires x > 0")
    if x <= _E:
        # z - x*log(z) is minimised at z = x with value x*(1 - log x) >= 0
        return 1

    def f(z: float) -> float:
        return z - x * math.log(z)

    hi = 2.0 * x
    while f(hi) < 0.0:
        hi *= 2.0
    root = _largest_root(f, x, hi)
    y = max(2, math.ceil(root - 1e-9))
    while f(y) < 0.0:
        y += 1
    while y > 1 and f(y - 1) >= 0.0:
        y -= 1
    return y


def omega2(x: float) -> int:
    """Least natural y above e with z >= x*log(log(z)) for all real z >= y."""
    if x <= 0:
        raise ValueError("omega2 requires x > 0")

    def f(z: float) -> float:
        return z - x * math.log(math.log(z))

    # f is minimised where z*log(z) = x; if even that point is nonnegative
    # the inequality holds everywhere above e and the answer is 3.
    g = lambda z: z * math.log(z) - x
    hi = max(3.0, x)
    while g(hi) < 0.0:
        hi *= 2.0
    z_crit = _largest_root(g, 1.0 + 1e-12, hi)
    if z_crit <= _E or f(z_crit) >= 0.0:
        return 3

    hi = 2.0 * z_crit
    while f(hi) < 0.0:
        hi *= 2.0
    root = _largest_root(f, z_crit, hi)
    y = max(3, math.ceil(root - 1e-9))
    while f(y) < 0.0:
        y += 1
    while y > 3 and f(y - 1) >= 0.0:
        y -= 1
    return y


def omega_star(epsilon: float, delta_min: float, alpha: float, k: int, sigma2: float) -> int:
    """max of the two threshold evaluations used by the finite-regret bound."""
    if epsilon <= 0 or delta_min <= 0:
        raise ValueError("epsilon and delta_min must be positive")
    base = 8.0 * sigma2 * alpha * k
    return max(omega(base / epsilon**2), omega(base / delta_min**2))


@dataclass(frozen=True)
class BoundInputs:
    gaps: GapProfile
    n: int
    alpha: float
    sigma2: float
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("horizon must be at least 1")
        if self.k != len(self.gaps.gaps):
            raise ValueError("k disagrees with the gap profile")


def theorem1_bound(inputs: BoundInputs) -> float:
    """Logarithmic regret ceiling for the optimistic structured policy.

    Valid for alpha > 2:
    2*Dmax*K*(a-1)/(a-2) + sum_{i subopt} 8*a*sigma2*log(n)/gap_i + sum_i gap_i.
    """
    a = inputs.alpha
    if a <= 2:
        raise ValueError("the logarithmic bound requires alpha > 2")
    g = inputs.gaps
    logn = math.log(inputs.n)
    out = 2.0 * g.delta_max * inputs.k * (a - 1.0) / (a - 2.0)
    for i in g.suboptimal:
        out += 8.0 * a * inputs.sigma2 * logn / g.gap(i)
    out += float(np.sum(g.gaps))
    return out


def theorem2_bound(gaps: GapProfile, omega_star_value: int, sigma2: float, k: int) -> float:
    """Horizon-independent regret ceiling (alpha = 4 implicit in the 32).

    sum_{i subopt} (32*sigma2*log(w)/gap_i + gap_i) + 3*Dmax*K + Dmax*K^3/w.
    """
    if omega_star_value < 1:
        raise ValueError("omega_star_value must be at least 1")
    logw = math.log(omega_star_value)
    out = 0.0
    for i in gaps.suboptimal:
        out += 32.0 * sigma2 * logw / gaps.gap(i) + gaps.gap(i)
    out += 3.0 * gaps.delta_max * k
    out += gaps.delta_max * k**3 / omega_star_value
    return out


def critical_samples(n: int, gap: float, alpha: float, sigma2: float) -> int:
    """ceil(8*sigma2*alpha*log(n)/gap^2): pulls beyond which an arm is ruled out."""
    if gap <= 0:
        raise ValueError("gap must be positive")
    if n < 1:
        raise ValueError("horizon must be at least 1")
    return math.ceil(8.0 * sigma2 * alpha * math.log(n) / gap**2)


def confidence_violation(
    bandit: StructuredBandit, theta_star, stats: ArmStatistics, t: int, alpha: float
) -> bool:
    """True iff some sampled arm's true mean escapes its confidence interval."""
    logt = math.log(t)
    for i in range(bandit.k):
        c = int(stats.counts[i])
        if c == 0:
            continue
        radius = math.sqrt(2.0 * alpha * bandit.sigma2 * logt / c)
        if abs(stats.means[i] - bandit.means[i](theta_star)) >= radius:
            return True
    return False


def deviation_bound(epsilon: float, n: int, sigma2: float) -> float:
    """Two-sided sample-mean deviation ceiling 2*exp(-eps^2*n/(2*sigma2))."""
    return 2.0 * math.exp(-(epsilon**2) * n / (2.0 * sigma2))


def gaussian_kl(mean_a: float, mean_b: float, sigma2: float) -> float:
    """Relative entropy between same-variance Gaussians: (a-b)^2/(2*sigma2)."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return (mean_a - mean_b) ** 2 / (2.0 * sigma2)


def symmetric_lower_bound(theta: float) -> float:
    """Asymptotic floor 1/(8*theta) on the worse of the two mirrored regrets."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    return 1.0 / (8.0 * theta)


def tradeoff_lower_bounds(
    delta: float, n: int, regret_theta1: float, regret_theta2: float
) -> tuple[float, float]:
    """Floors linking the regrets of two statistically-confusable parameters.

    Returns (floor on the first parameter's regret given the second's,
    floor on the second parameter's regret given the first's).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    part1 = (1.0 + math.log(2.0 * n * delta**2)) / (8.0 * delta) - regret_theta2 / 2.0
    part2 = (n * delta / 2.0) * math.exp(-4.0 * regret_theta1 * delta) - regret_theta1
    return (part1, part2)


# ---------------------------------------------------------------------------
# grid scans: finite-regret margin, three-way classification, ambiguity ratio
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonResult:
    """Outcome of the finite-regret margin scan.

    ``epsilon`` is None when no positive margin survives grid refinement
    (the finite-regret bound is then inapplicable, which does not by itself
    prove logarithmic regret).  ``degenerate`` flags a queried parameter
    whose optimal arm is not unique.
    """

    epsilon: float | None
    degenerate: bool = False


def _mean_matrix(bandit: StructuredBandit, points) -> np.ndarray:
    rows = []
    for mu in bandit.means:
        if isinstance(mu, PiecewiseLinear):
            rows.append(mu.values_on_grid(points))
        else:
            rows.append(np.array([mu(p) for p in points], dtype=np.float64))
    return np.vstack(rows)


def _margin(matrix: np.ndarray, star: int, star_value: float) -> float:
    """Smallest |mu_star - star_value| over points where star is not strictly best.

    Returns +inf when the strict-argmax condition holds at every point.
    """
    others = np.delete(matrix, star, axis=0)
    ok = np.all(matrix[star] > others, axis=0)
    bad = ~ok
    if not np.any(bad):
        return math.inf
    return float(np.min(np.abs(matrix[star, bad] - star_value)))


def finite_regret_epsilon(
    bandit: StructuredBandit, theta_star, scan_resolution: int | None = None
) -> EpsilonResult:
    """Largest margin eps such that parameters whose optimal-arm mean lies
    within eps of the truth still make that arm the strict argmax.

    The scan runs on the enumeration grid and again at double resolution; a
    margin that keeps shrinking under refinement is reported as absent.
    Results are grid-resolution dependent by construction.
    """
    prof = gap_profile(bandit, theta_star)
    if bandit.k > 1 and len(prof.suboptimal) < bandit.k - 1:
        return EpsilonResult(None, degenerate=True)
    star = prof.optimal_arm - 1
    star_value = prof.optimal_mean

    space = bandit.space
    if isinstance(space, FiniteSpace):
        m = _margin(_mean_matrix(bandit, space.labels), star, star_value)
        return EpsilonResult(m if m > 0 else None)
    if not isinstance(space, IntervalSpace):
        raise ValueError("margin scan needs an enumerable space")

    res = scan_resolution or space.resolution
    m_coarse = _margin(_mean_matrix(bandit, space.grid(res)), star, star_value)
    m_fine = _margin(_mean_matrix(bandit, space.grid(2 * res - 1)), star, star_value)
    if math.isinf(m_fine):
        return EpsilonResult(math.inf)
    if math.isinf(m_coarse):
        # failing region thinner than the coarse step: refine once more
        m_coarse, m_fine = m_fine, _margin(
            _mean_matrix(bandit, space.grid(4 * res - 3)), star, star_value
        )
        if math.isinf(m_fine):
            return EpsilonResult(math.inf)
    if m_fine <= 0 or m_fine < 0.75 * m_coarse:
        return EpsilonResult(None)
    return EpsilonResult(m_fine)


@dataclass(frozen=True)
class ThetaClass:
    """Three-way regret classification of one parameter point.

    Hard points carry an equal-mean witness where the optimal arm flips;
    easy points carry their finite-regret margin.
    """

    label: str
    witness: float | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if self.label not in ("easy", "ambiguous", "hard"):
            raise ValueError(f"unknown label {self.label!r}")


def classify_parameter(
    bandit: StructuredBandit, theta, scan_resolution: int | None = None
) -> ThetaClass:
    """Classify one two-arm parameter as easy / ambiguous / hard."""
    result = classify_many(bandit, [theta], scan_resolution)[0]
    if result is None:
        raise ValueError(f"equal arm means at {theta!r}: classification undefined")
    return result


def classify_many(
    bandit: StructuredBandit, thetas, scan_resolution: int | None = None
) -> list[ThetaClass | None]:
    """Vector version of :func:`classify_parameter`.

    Zero-gap points yield None instead of raising, so whole-grid sweeps can
    skip degenerate points.
    """
    if bandit.k != 2:
        raise ValueError("classification is defined for two-arm problems")
    space = bandit.space
    if not isinstance(space, IntervalSpace):
        raise ValueError("classification needs an interval space")
    res = scan_resolution or space.resolution
    grid_f = space.grid(2 * res - 1)
    mat_f = _mean_matrix(bandit, grid_f)
    mat_c = mat_f[:, ::2]  # the coarse grid is every second fine point
    vlo, vhi = bandit.value_range()
    tol = 1e-9 * max(vhi - vlo, 1.0)

    out: list[ThetaClass | None] = []
    for theta in thetas:
        mus = bandit.mean_vector(theta)
        if mus[0] == mus[1]:
            out.append(None)
            continue
        star = int(np.argmax(mus))
        other = 1 - star
        # hard: some parameter shares the optimal arm's mean value while the
        # other arm is the winner there (lowest-index tie rule included)
        if star == 0:
            flips = mat_f[1] > mat_f[0]
        else:
            flips = mat_f[0] >= mat_f[1]
        same_value = np.abs(mat_f[star] - mus[star]) <= tol
        hard_hits = np.nonzero(same_value & flips)[0]
        if hard_hits.size:
            out.append(ThetaClass("hard", witness=float(grid_f[hard_hits[0]])))
            continue
        m_coarse = _margin(mat_c, star, float(mus[star]))
        m_fine = _margin(mat_f, star, float(mus[star]))
        if (
            not math.isinf(m_fine)
            and m_fine > 0
            and (math.isinf(m_coarse) or m_fine >= 0.75 * m_coarse)
        ):
            out.append(ThetaClass("easy", epsilon=m_fine))
        elif math.isinf(m_fine):
            out.append(ThetaClass("easy", epsilon=math.inf))
        else:
            out.append(ThetaClass("ambiguous"))
    return out


def ambiguity_ratio(
    bandit: StructuredBandit, theta, delta: float, scan_resolution: int | None = None
) -> float | None:
    """Grid supremum of (risk of the other arm) / (optimal-mean displacement)
    over parameters whose optimal-arm mean lies within ``delta`` of the truth.

    Arms are relabelled so the optimal arm at ``theta`` plays the numerator's
    subtrahend role.  Returns None when no in-range parameter exists (e.g.
    the optimal arm's mean function is locally constant, so every candidate
    sits at zero displacement and is excluded).
    """
    if bandit.k != 2:
        raise ValueError("ambiguity ratio is defined for two-arm problems")
    if delta <= 0:
        raise ValueError("delta must be positive")
    space = bandit.space
    if not isinstance(space, IntervalSpace):
        raise ValueError("ambiguity ratio needs an interval space")
    prof = gap_profile(bandit, theta)
    a = prof.optimal_arm - 1
    b = 1 - a
    grid = space.grid(scan_resolution or space.resolution)
    mat = _mean_matrix(bandit, grid)
    den = np.abs(mat[a] - prof.optimal_mean)
    sel = (den > 0) & (den < delta)
    if not np.any(sel):
        return None
    return float(np.max((mat[b, sel] - mat[a, sel]) / den[sel]))
