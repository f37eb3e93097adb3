"""Simulation and analysis toolkit for finite-armed structured bandits."""

from .catalog import builtin_names, make_builtin
from .harness import (
    ExperimentConfig,
    PolicySpec,
    RegretCurve,
    RunResult,
    SweepResult,
    concentration_check,
    geometric_checkpoints,
    read_table,
    resolve_problem,
    run_episode,
    run_experiment,
    violation_frequencies,
    write_table,
)
from .means import Breakpoint, Coordinate, PiecewiseLinear, Tabulated
from .policies import (
    ConfidenceSet,
    PhasedState,
    RiskAverseState,
    confidence_radius,
    make_policy,
    phased_step,
    plausible_parameters,
    ucb_select,
    ucbs_ra_select,
    ucbs_select,
)
from .problems import (
    ArmStatistics,
    Environment,
    GapProfile,
    StructuredBandit,
    evaluate_mean,
    gap_profile,
    sample_reward,
)
from .problemfile import load_problem
from .spaces import BoxSpace, FiniteSpace, IntervalSpace
from .theory import (
    BoundInputs,
    EpsilonResult,
    ThetaClass,
    ambiguity_ratio,
    classify_many,
    classify_parameter,
    confidence_violation,
    critical_samples,
    deviation_bound,
    finite_regret_epsilon,
    gaussian_kl,
    omega,
    omega2,
    omega_star,
    symmetric_lower_bound,
    theorem1_bound,
    theorem2_bound,
    tradeoff_lower_bounds,
)

__version__ = "0.1.0"
