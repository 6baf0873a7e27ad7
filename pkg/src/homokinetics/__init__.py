import logging
import sys

from . import _config
from ._config import get_default_threads, set_default_threads
from .analysis import ComparisonReport, FitResult, compare, fit_power_law, write_report
from .dsmc import (
    InitialDistribution,
    Maxwellian,
    MomentSummary,
    ParticleEnsemble,
    Runner,
    SimConfig,
    SimOverrides,
    TimeSeries,
    TwoTemperature,
    UniformBall,
    init_ensemble,
    norm_1_s,
    read_series_csv,
    run,
    step_collisions,
    step_transport,
    summarize,
    write_series_csv,
)
from .exceptions import (
    CompatibilityError,
    ConfigError,
    DegenerateFlow,
    DomainError,
    FiniteHorizon,
    HomokineticsException,
    InsufficientData,
    MajorantViolation,
    MissingB,
    NonPositiveValues,
    NumericalFailure,
    QuadratureBudgetExceeded,
    RegimeMismatch,
    RunErrorDetails,
    StiffnessFailure,
    UnclassifiableFlow,
)
from .flow import (
    DilatationFrame,
    FlowCase,
    FlowCaseTag,
    FlowPath,
    Matrix3,
    RestFrame,
    ScaledDecomposition,
    ScalingTag,
    canonical_case,
    classify,
    density,
    make_flow,
    propagate,
    scaled_decomposition,
)
from .hilbert import (
    BetaTrajectory,
    CollisionDominance,
    GammaRange,
    Prediction,
    Regime,
    RegimeLabel,
    beta_ode,
    case1_rate,
    collision_dominance,
    late_time_law,
    predict,
    regime_table,
)
from .kernel import (
    AngularDensity,
    CollisionOutcome,
    KernelSpec,
    acceptance_rate,
    collide,
    evaluate_kernel,
    inverse_power_gamma,
    sample_omega,
    total_rate,
)
from .lifecycle import SimulationHooks
from .linop import (
    BasisSpec,
    GalerkinOperator,
    GreenKubo,
    QuadratureBudget,
    assemble,
    dump_operator,
    green_kubo_b,
    heating_rate,
    hilbert_h1,
    solve_on_W,
)
from .scenario import Scenario, bundled_scenarios, load_scenario, parse_scenario
from .tracing import (
    LoggingSpanProcessor,
    Span,
    SpanData,
    TracingProcessor,
    add_trace_processor,
    set_trace_processors,
)
from .usage import CollisionUsage
from .version import __version__


def enable_verbose_stdout_logging():
    """Enables verbose logging to stdout. This is useful for debugging."""
    logger = logging.getLogger("homokinetics")
    logger.setLevel(logging.DEBUG)
    logger.addHandler(logging.StreamHandler(sys.stdout))


__all__ = [
    "FlowPath",
    "FlowCase",
    "FlowCaseTag",
    "Matrix3",
    "ScalingTag",
    "ScaledDecomposition",
    "RestFrame",
    "DilatationFrame",
    "make_flow",
    "classify",
    "canonical_case",
    "density",
    "propagate",
    "scaled_decomposition",
    "KernelSpec",
    "AngularDensity",
    "CollisionOutcome",
    "acceptance_rate",
    "collide",
    "evaluate_kernel",
    "inverse_power_gamma",
    "sample_omega",
    "total_rate",
    "SimConfig",
    "SimOverrides",
    "InitialDistribution",
    "Maxwellian",
    "UniformBall",
    "TwoTemperature",
    "ParticleEnsemble",
    "MomentSummary",
    "TimeSeries",
    "Runner",
    "run",
    "init_ensemble",
    "norm_1_s",
    "summarize",
    "step_collisions",
    "step_transport",
    "read_series_csv",
    "write_series_csv",
    "SimulationHooks",
    "CollisionUsage",
    "BasisSpec",
    "QuadratureBudget",
    "GalerkinOperator",
    "GreenKubo",
    "assemble",
    "solve_on_W",
    "green_kubo_b",
    "hilbert_h1",
    "heating_rate",
    "dump_operator",
    "Prediction",
    "Regime",
    "RegimeLabel",
    "GammaRange",
    "CollisionDominance",
    "BetaTrajectory",
    "predict",
    "regime_table",
    "case1_rate",
    "collision_dominance",
    "beta_ode",
    "late_time_law",
    "FitResult",
    "ComparisonReport",
    "fit_power_law",
    "compare",
    "write_report",
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "bundled_scenarios",
    "HomokineticsException",
    "NumericalFailure",
    "DegenerateFlow",
    "FiniteHorizon",
    "UnclassifiableFlow",
    "DomainError",
    "ConfigError",
    "MajorantViolation",
    "QuadratureBudgetExceeded",
    "StiffnessFailure",
    "CompatibilityError",
    "MissingB",
    "InsufficientData",
    "NonPositiveValues",
    "RegimeMismatch",
    "RunErrorDetails",
    "TracingProcessor",
    "LoggingSpanProcessor",
    "Span",
    "SpanData",
    "add_trace_processor",
    "set_trace_processors",
    "set_default_threads",
    "get_default_threads",
    "enable_verbose_stdout_logging",
    "_config",
    "__version__",
]
