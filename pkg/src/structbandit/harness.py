"""Deterministic Monte-Carlo experiment engine.

An experiment is (problem, true parameter or parameter sweep, horizon,
replication count, policies).  Replication r of an experiment draws its
rewards from stream r of the base seed (see :mod:`structbandit.rng`), so

* results are independent of the number of workers and of scheduling,
* policies compared "with the same seeds" see identical reward tensors,
* doubling the replication count extends, rather than reshuffles, the
  replication set.

Regret is pseudo-regret: each step costs the true-mean gap of the chosen
arm, accumulated as gap . pull-counts at every checkpoint, never as noisy
reward differences.
"""

from __future__ import annotations

import math
import multiprocessing
import sys
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .catalog import builtin_names, make_builtin
from .policies import DEFAULT_ALPHA, POLICY_NAMES, make_policy
from .problems import ArmStatistics, Environment, StructuredBandit, gap_profile, sample_reward
from .rng import GaussianStream
from .theory import confidence_violation, deviation_bound


def geometric_checkpoints(horizon: int, ratio: float = 1.25) -> tuple[int, ...]:
    """Strictly increasing times 1, ..., horizon growing by ``ratio``."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    out = [1]
    while out[-1] < horizon:
        out.append(min(horizon, max(out[-1] + 1, math.floor(out[-1] * ratio))))
    return tuple(out)


def resolve_problem(problem: str, resolution: int = 2001) -> StructuredBandit:
    """Catalog name, or a path to a problem definition file."""
    if problem in builtin_names():
        return make_builtin(problem, resolution)
    from .problemfile import load_problem

    return load_problem(problem, default_resolution=resolution)


@dataclass(frozen=True)
class PolicySpec:
    name: str
    alpha: float | None = None

    def __post_init__(self):
        if self.name not in POLICY_NAMES:
            raise ValueError(f"unknown policy {self.name!r}")
        if self.name == "phased" and self.alpha is not None:
            raise ValueError("the phased rule has a fixed exploration constant")

    @property
    def effective_alpha(self) -> float | None:
        if self.name == "phased":
            return None
        return DEFAULT_ALPHA[self.name] if self.alpha is None else self.alpha

    def describe(self) -> str:
        a = self.effective_alpha
        return self.name if a is None else f"{self.name}:{a:g}"


@dataclass
class ExperimentConfig:
    problem: str
    horizon: int
    reps: int
    seed: int
    policies: tuple[PolicySpec, ...]
    theta: float | None = None
    sweep: tuple[float, float, int] | None = None
    checkpoints: tuple[int, ...] | None = None
    checkpoint_ratio: float = 1.25
    workers: int = 1
    resolution: int = 2001

    def __post_init__(self):
        self.policies = tuple(self.policies)
        if not self.policies:
            raise ValueError("need at least one policy")
        if self.reps < 1:
            raise ValueError("need at least one replication")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if (self.theta is None) == (self.sweep is None):
            raise ValueError("specify exactly one of theta or sweep")
        if self.sweep is not None:
            lo, hi, steps = self.sweep
            if steps < 1:
                raise ValueError("sweep needs at least one step")
            if steps > 1 and not lo < hi:
                raise ValueError("sweep requires min < max")
        if self.checkpoints is not None:
            cps = tuple(int(c) for c in self.checkpoints)
            if not cps or list(cps) != sorted(set(cps)):
                raise ValueError("checkpoints must be strictly increasing")
            if cps[0] < 1 or cps[-1] != self.horizon:
                raise ValueError("checkpoints must lie in [1, horizon] and end at the horizon")
            self.checkpoints = cps
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def effective_checkpoints(self) -> tuple[int, ...]:
        if self.checkpoints is not None:
            return self.checkpoints
        if self.sweep is not None:
            return (self.horizon,)
        return geometric_checkpoints(self.horizon, self.checkpoint_ratio)

    def sweep_thetas(self) -> np.ndarray:
        lo, hi, steps = self.sweep
        return np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])

    def labels(self) -> tuple[str, ...]:
        names = [p.name for p in self.policies]
        return tuple(
            p.name if names.count(p.name) == 1 else p.describe() for p in self.policies
        )

    def header_items(self) -> list[tuple[str, str]]:
        """Config echo for table headers; excludes execution-plan details."""
        items = [("problem", self.problem)]
        if self.theta is not None:
            items.append(("theta", f"{self.theta:g}"))
        else:
            lo, hi, steps = self.sweep
            items.append(("sweep", f"{lo:g}:{hi:g}:{steps}"))
        items += [
            ("horizon", str(self.horizon)),
            ("reps", str(self.reps)),
            ("seed", str(self.seed)),
            ("policies", ",".join(p.describe() for p in self.policies)),
        ]
        return items


@dataclass
class EpisodeResult:
    checkpoints: np.ndarray
    counts: np.ndarray  # (C, K) pulls after each checkpointed step
    regret: np.ndarray  # (C,) cumulative pseudo-regret
    violations: np.ndarray  # (C,) confidence-interval failure before each step
    arms: np.ndarray | None = None


def _regret_from_counts(counts: np.ndarray, gaps: np.ndarray) -> np.ndarray:
    out = np.zeros(counts.shape[0], dtype=np.float64)
    for i in range(len(gaps)):  # fixed order: deterministic reduction
        out += gaps[i] * counts[:, i]
    return out


def _kernel_eligible(name: str, bandit: StructuredBandit) -> bool:
    if name == "ucb":
        return True
    if name == "phased":
        return bandit.k == 2
    if name in ("ucbs", "ucbs-ra"):
        return _kernels.kernel_capacity_ok(bandit)
    return False


def run_episode(
    env: Environment,
    policy_name: str,
    alpha: float | None,
    horizon: int,
    checkpoints,
    use_kernel: bool = True,
    record_arms: bool = False,
) -> EpisodeResult:
    """One policy episode; fully determined by the environment's identity."""
    bandit = env.bandit
    cps = np.asarray(checkpoints, dtype=np.int64)
    spec = PolicySpec(policy_name, alpha)
    if spec.name == "ucbs-ra" and not getattr(bandit.space, "ambiguous", ()):
        raise ValueError("risk-averse selection needs ambiguous marks on the space")
    if spec.name == "phased" and bandit.k != 2:
        raise ValueError("the phase-based rule needs exactly two arms")

    if use_kernel and _kernel_eligible(spec.name, bandit):
        counts, viol, arms = _run_kernel_episode(env, spec, horizon, cps, record_arms)
    else:
        counts, viol, arms = _run_pure_episode(env, spec, horizon, cps, record_arms)

    gaps = gap_profile(bandit, env.theta_star).gaps
    return EpisodeResult(
        checkpoints=cps,
        counts=counts,
        regret=_regret_from_counts(counts, gaps),
        violations=viol,
        arms=arms if record_arms else None,
    )


def _run_kernel_episode(env, spec, horizon, cps, record_arms):
    bandit = env.bandit
    k = bandit.k
    rewards = env.reward_matrix(horizon)
    counts = np.zeros((len(cps), k), dtype=np.int64)
    viol = np.zeros(len(cps), dtype=np.uint8)
    arms = np.zeros(horizon if record_arms else 1, dtype=np.int64)
    mu_true = env.true_means
    alpha = spec.effective_alpha
    if spec.name == "ucb":
        _kernels.ucb_episode(
            rewards, alpha, bandit.sigma2, horizon, cps, mu_true, counts, viol,
            arms, record_arms,
        )
    elif spec.name == "ucbs":
        p = _kernels.pack_pwl(bandit)
        _kernels.ucbs_episode(
            p["seg"], p["nseg"], p["lo"], p["hi"], rewards, alpha, bandit.sigma2,
            horizon, cps, mu_true, counts, viol, arms, record_arms,
        )
    elif spec.name == "ucbs-ra":
        p = _kernels.pack_pwl(bandit)
        _kernels.ucbs_ra_episode(
            p["seg"], p["nseg"], p["bp_x"], p["bp_at"], p["nbp"], p["lo"], p["hi"],
            p["amb"], rewards, alpha, bandit.sigma2, horizon, cps, mu_true,
            counts, viol, arms, record_arms,
        )
    else:
        _kernels.phased_episode(rewards, horizon, cps, counts, arms, record_arms)
    return counts, viol.astype(bool), arms


def _run_pure_episode(env, spec, horizon, cps, record_arms):
    bandit = env.bandit
    policy = make_policy(spec.name, bandit, spec.alpha)
    stats = ArmStatistics(bandit.k)
    counts = np.zeros((len(cps), bandit.k), dtype=np.int64)
    viol = np.zeros(len(cps), dtype=bool)
    arms = np.zeros(horizon if record_arms else 1, dtype=np.int64)
    track_viol = spec.name in ("ucb", "ucbs", "ucbs-ra")
    ci = 0
    for t in range(1, horizon + 1):
        at_cp = ci < len(cps) and t == cps[ci]
        if at_cp and track_viol:
            viol[ci] = confidence_violation(
                bandit, env.theta_star, stats, t, spec.effective_alpha
            )
        arm = policy.select(stats, t)
        x = sample_reward(env, arm, stats)
        policy.observe(arm, x)
        if record_arms:
            arms[t - 1] = arm
        if at_cp:
            counts[ci] = stats.counts
            ci += 1
    return counts, viol, arms


# ---------------------------------------------------------------------------
# experiments: replication loops, optional process pool, fixed-order reduction
# ---------------------------------------------------------------------------


@dataclass
class RegretCurve:
    checkpoints: np.ndarray
    mean_regret: np.ndarray
    terminal_regrets: np.ndarray  # one per replication, in replication order
    violation_freq: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def terminal_mean(self) -> float:
        return float(self.mean_regret[-1])

    @property
    def terminal_stderr(self) -> float:
        r = self.terminal_regrets
        if len(r) < 2:
            return 0.0
        return float(np.std(r, ddof=1) / math.sqrt(len(r)))


@dataclass
class RunResult:
    checkpoints: np.ndarray
    labels: tuple[str, ...]
    curves: dict
    meta: dict = field(default_factory=dict)

    def table(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.checkpoints.astype(np.float64)
        cols = np.vstack([self.curves[lb].mean_regret for lb in self.labels])
        return x, cols


@dataclass
class SweepResult:
    thetas: np.ndarray
    labels: tuple[str, ...]
    mean_terminal: np.ndarray  # (P, S)
    terminal: np.ndarray  # (P, S, R)
    meta: dict = field(default_factory=dict)

    def table(self) -> tuple[np.ndarray, np.ndarray]:
        return self.thetas, self.mean_terminal


def _episode_task(args):
    (problem, resolution, theta, name, alpha, horizon, cps, seed, rep, use_kernel) = args
    bandit = resolve_problem(problem, resolution)
    env = Environment(bandit, theta, seed, stream=rep)
    ep = run_episode(env, name, alpha, horizon, np.array(cps, dtype=np.int64), use_kernel)
    return ep.counts, ep.violations


def _run_tasks(tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [_episode_task(t) for t in tasks]
    ctx = multiprocessing.get_context("fork")
    chunk = max(1, len(tasks) // (workers * 4))
    with ctx.Pool(processes=workers) as pool:
        return pool.map(_episode_task, tasks, chunksize=chunk)


def run_experiment(config: ExperimentConfig, use_kernel: bool = True):
    """Run all replications; average in fixed replication order.

    Returns a :class:`RunResult` for a fixed parameter (one regret curve per
    policy) or a :class:`SweepResult` for a parameter sweep (terminal mean
    regret per parameter per policy).
    """
    cps = config.effective_checkpoints()
    thetas = [config.theta] if config.theta is not None else list(config.sweep_thetas())
    labels = config.labels()
    bandit = resolve_problem(config.problem, config.resolution)

    tasks = []
    for si, theta in enumerate(thetas):
        for pi, spec in enumerate(config.policies):
            for rep in range(config.reps):
                tasks.append(
                    (
                        config.problem,
                        config.resolution,
                        theta,
                        spec.name,
                        spec.alpha,
                        config.horizon,
                        cps,
                        config.seed,
                        rep,
                        use_kernel,
                    )
                )
    results = _run_tasks(tasks, config.workers)

    n_theta, n_pol, reps, n_cp = len(thetas), len(config.policies), config.reps, len(cps)
    meta = dict(config.header_items())
    gaps_by_theta = [gap_profile(bandit, th).gaps for th in thetas]

    if config.theta is not None:
        curves = {}
        for pi, label in enumerate(labels):
            reg = np.empty((reps, n_cp))
            vio = np.empty((reps, n_cp))
            for rep in range(reps):
                counts, viol = results[pi * reps + rep]
                reg[rep] = _regret_from_counts(counts, gaps_by_theta[0])
                vio[rep] = viol
            curves[label] = RegretCurve(
                checkpoints=np.array(cps, dtype=np.int64),
                mean_regret=reg.mean(axis=0),
                terminal_regrets=reg[:, -1].copy(),
                violation_freq=vio.mean(axis=0),
                meta=meta,
            )
        return RunResult(np.array(cps, dtype=np.int64), labels, curves, meta)

    terminal = np.empty((n_pol, n_theta, reps))
    for si in range(n_theta):
        for pi in range(n_pol):
            base = (si * n_pol + pi) * reps
            for rep in range(reps):
                counts, _ = results[base + rep]
                terminal[pi, si, rep] = float(
                    _regret_from_counts(counts, gaps_by_theta[si])[-1]
                )
    return SweepResult(
        thetas=np.array(thetas, dtype=np.float64),
        labels=labels,
        mean_terminal=terminal.mean(axis=2),
        terminal=terminal,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# plot-ready data tables
# ---------------------------------------------------------------------------


def format_table(result) -> str:
    """Whitespace-separated text: x column then one regret column per policy."""
    x, cols = result.table()
    lines = []
    for key, value in result.meta.items():
        lines.append(f"# {key}={value}")
    xname = "theta" if isinstance(result, SweepResult) else "n"
    lines.append(f"# columns: {xname} " + " ".join(result.labels))
    x_is_time = isinstance(result, RunResult)
    for j in range(len(x)):
        xv = f"{int(x[j])}" if x_is_time else f"{x[j]:.6g}"
        row = [xv] + [f"{cols[p, j]:.6g}" for p in range(cols.shape[0])]
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def write_table(result, path=None) -> str:
    """Render the table; write it to ``path`` (or stdout when None)."""
    text = format_table(result)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def read_table(path) -> tuple[list[str], np.ndarray]:
    """Parse a table back into (header lines, data array)."""
    headers = []
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                headers.append(line)
            else:
                rows.append([float(v) for v in line.split()])
    return headers, np.array(rows, dtype=np.float64)


# ---------------------------------------------------------------------------
# statistical checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConcentrationCheck:
    frequency: float
    bound: float
    stderr: float

    @property
    def passed(self) -> bool:
        return self.frequency <= self.bound + 3.0 * self.stderr


def concentration_check(
    epsilon: float = 1.0,
    n: int = 8,
    sigma2: float = 1.0,
    trials: int = 100_000,
    seed: int = 0,
) -> ConcentrationCheck:
    """Empirical two-sided deviation frequency of an n-sample mean versus its
    sub-gaussian ceiling; the standard error is the binomial one at the
    ceiling."""
    sigma = math.sqrt(sigma2)
    z = GaussianStream(seed, stream=0, arm=0).draw(trials * n).reshape(trials, n)
    mu_hat = sigma * z.mean(axis=1)
    freq = float(np.mean(np.abs(mu_hat) >= epsilon))
    bound = deviation_bound(epsilon, n, sigma2)
    stderr = math.sqrt(bound * (1.0 - bound) / trials)
    return ConcentrationCheck(frequency=freq, bound=bound, stderr=stderr)


def violation_frequencies(
    problem: str,
    theta: float,
    policy: PolicySpec,
    episodes: int,
    horizon: int,
    ts,
    seed: int,
    workers: int = 1,
    use_kernel: bool = True,
) -> np.ndarray:
    """Empirical frequency, over episodes, of a confidence-interval failure
    just before each step in ``ts`` (the last entry must be the horizon)."""
    config = ExperimentConfig(
        problem=problem,
        horizon=horizon,
        reps=episodes,
        seed=seed,
        policies=(policy,),
        theta=theta,
        checkpoints=tuple(int(t) for t in ts),
        workers=workers,
    )
    result = run_experiment(config, use_kernel=use_kernel)
    return result.curves[result.labels[0]].violation_freq
