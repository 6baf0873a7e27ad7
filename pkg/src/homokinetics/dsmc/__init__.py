from .config import (
    InitialDistribution,
    Maxwellian,
    SimConfig,
    SimOverrides,
    TwoTemperature,
    UniformBall,
    build_frame,
)
from .ensemble import (
    MomentSummary,
    ParticleEnsemble,
    init_ensemble,
    norm_1_s,
    replica_rng,
    summarize,
)
from .runner import Runner, run, simulate_replica
from .series import (
    CSV_COLUMNS,
    TimeSeries,
    read_series_csv,
    reduce_replicas,
    series_to_csv,
    write_series_csv,
)
from .steps import CandidateDraws, majorant, step_collisions, step_transport

__all__ = [
    "CSV_COLUMNS",
    "CandidateDraws",
    "InitialDistribution",
    "Maxwellian",
    "MomentSummary",
    "ParticleEnsemble",
    "Runner",
    "SimConfig",
    "SimOverrides",
    "TimeSeries",
    "TwoTemperature",
    "UniformBall",
    "build_frame",
    "init_ensemble",
    "majorant",
    "norm_1_s",
    "read_series_csv",
    "reduce_replicas",
    "replica_rng",
    "run",
    "series_to_csv",
    "simulate_replica",
    "step_collisions",
    "step_transport",
    "summarize",
    "write_series_csv",
]
