"""Command-line front door.

Verbs: ``run`` (one problem, one policy), ``sweep`` (policy comparison over a
parameter grid), ``classify`` (easy/ambiguous/hard labels on a grid),
``bounds`` (regret-ceiling calculators), ``omega`` (threshold functions),
``reproduce`` (preset experiments writing plot tables), and
``concentration-test`` (empirical deviation-bound check).

Exit codes: 0 success, 1 usage error, 2 runtime error (including a failed
concentration check).  All numeric output is plain decimal with six
significant digits.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ExperimentConfig,
    PolicySpec,
    concentration_check,
    resolve_problem,
    run_experiment,
    write_table,
)
from .problems import gap_profile
from .theory import (
    BoundInputs,
    classify_many,
    finite_regret_epsilon,
    omega,
    omega2,
    omega_star,
    theorem1_bound,
    theorem2_bound,
)

_ALGOS = ("ucb", "ucbs", "ucbs-ra", "phased")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _parse_algos(text: str) -> tuple[PolicySpec, ...]:
    specs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, alpha = chunk.partition(":")
        if name not in _ALGOS:
            raise UsageError(f"unknown policy {name!r}")
        try:
            specs.append(PolicySpec(name, float(alpha) if alpha else None))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not specs:
        raise UsageError("empty policy list")
    return tuple(specs)


def _add_common(p, sweep=False):
    p.add_argument("--problem", required=True, help="catalog name or problem file path")
    p.add_argument("--horizon", type=int, default=50_000)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="write the data table here")
    if sweep:
        p.add_argument("--theta-min", type=float, required=True)
        p.add_argument("--theta-max", type=float, required=True)
        p.add_argument("--theta-steps", type=int, required=True)
        p.add_argument("--algos", default="ucbs,ucb",
                       help="comma-separated policies, optionally name:alpha")
    else:
        p.add_argument("--theta", type=float, required=True)
        p.add_argument("--algo", choices=_ALGOS, default="ucbs")
        p.add_argument("--alpha", type=float, default=None,
                       help="exploration constant (defaults: ucb 2, ucbs 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="structbandit", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one policy at a fixed parameter")
    _add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="compare policies over a parameter grid")
    _add_common(p, sweep=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="easy/ambiguous/hard labels on a grid")
    p.add_argument("--problem", required=True)
    p.add_argument("--grid", type=int, default=201)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bounds", help="regret-ceiling calculators")
    p.add_argument("--theorem", choices=("1", "2"), required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None, help="theorem 1 only")
    p.add_argument("--horizon", type=int, default=None, help="theorem 1 only")
    p.add_argument("--epsilon", type=float, default=None,
                   help="theorem 2 margin; scanned from the problem when omitted")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("omega", help="threshold functions")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--two", action="store_true", help="use the log-log variant")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("reproduce", help="preset experiments writing plot tables")
    p.add_argument("preset", choices=("fig-a-sweep", "fig-a-horizon", "fig-b-sweep",
                                      "fig-c-sweep"))
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="defaults to <preset>.txt")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("concentration-test", help="empirical deviation-bound check")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_concentration)

    return parser


def cmd_run(ns) -> int:
    config = ExperimentConfig(
        problem=ns.problem,
        horizon=ns.horizon,
        reps=ns.reps,
        seed=ns.seed,
        policies=(PolicySpec(ns.algo, ns.alpha),),
        theta=ns.theta,
        workers=ns.workers,
    )
    result = run_experiment(config)
    label = result.labels[0]
    print(_fmt(result.curves[label].terminal_mean))
    if ns.out:
        write_table(result, ns.out)
    return 0


def cmd_sweep(ns) -> int:
    config = ExperimentConfig(
        problem=ns.problem,
        horizon=ns.horizon,
        reps=ns.reps,
        seed=ns.seed,
        policies=_parse_algos(ns.algos),
        sweep=(ns.theta_min, ns.theta_max, ns.theta_steps),
        workers=ns.workers,
    )
    result = run_experiment(config)
    write_table(result, ns.out)
    return 0


def cmd_classify(ns) -> int:
    if ns.grid < 2:
        raise UsageError("--grid must be at least 2")
    bandit = resolve_problem(ns.problem)
    points = bandit.space.grid(ns.grid)
    results = classify_many(bandit, points)
    print("# columns: theta label")
    for theta, res in zip(points, results):
        label = "degenerate" if res is None else res.label
        print(f"{theta:.6g} {label}")
    return 0


def cmd_bounds(ns) -> int:
    bandit = resolve_problem(ns.problem)
    gaps = gap_profile(bandit, ns.theta)
    if ns.theorem == "1":
        if ns.horizon is None:
            raise UsageError("theorem 1 needs --horizon")
        alpha = 4.0 if ns.alpha is None else ns.alpha
        inputs = BoundInputs(gaps, ns.horizon, alpha, bandit.sigma2, bandit.k)
        print(_fmt(theorem1_bound(inputs)))
        return 0
    if ns.alpha is not None or ns.horizon is not None:
        raise UsageError("theorem 2 is horizon-free with a fixed constant")
    if gaps.delta_min is None:
        raise ValueError("every arm is optimal: the bound is trivially zero")
    eps = ns.epsilon
    if eps is None:
        scan = finite_regret_epsilon(bandit, ns.theta)
        if scan.degenerate or scan.epsilon is None:
            raise ValueError("no finite-regret margin at this parameter")
        eps = scan.epsilon
    w = omega_star(eps, gaps.delta_min, 4.0, bandit.k, bandit.sigma2)
    print(_fmt(theorem2_bound(gaps, w, bandit.sigma2, bandit.k)))
    return 0


def cmd_omega(ns) -> int:
    print(omega2(ns.x) if ns.two else omega(ns.x))
    return 0


_PRESETS = {
    "fig-a-sweep": dict(problem="example-a", sweep=(-0.2, 0.2, 41), horizon=50_000),
    "fig-a-horizon": dict(problem="example-a", theta=0.04, horizon=100_000),
    "fig-b-sweep": dict(problem="example-b", sweep=(-0.2, 0.2, 41), horizon=50_000),
    "fig-c-sweep": dict(problem="example-c", sweep=(-0.2, 0.2, 41), horizon=50_000),
}


def cmd_reproduce(ns) -> int:
    preset = _PRESETS[ns.preset]
    config = ExperimentConfig(
        reps=ns.reps,
        seed=ns.seed,
        policies=(PolicySpec("ucbs", 4.0), PolicySpec("ucb", 2.0)),
        workers=ns.workers,
        **preset,
    )
    out = ns.out or f"{ns.preset}.txt"
    result = run_experiment(config)
    write_table(result, out)
    print(f"wrote {out}", file=sys.stderr)
    return 0


def cmd_concentration(ns) -> int:
    check = concentration_check(ns.epsilon, ns.n, ns.sigma2, ns.trials, ns.seed)
    verdict = "PASS" if check.passed else "FAIL"
    print(f"{_fmt(check.frequency)} {_fmt(check.bound)} {verdict}")
    return 0 if check.passed else 2


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        return ns.func(ns) or 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
