from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..flow import AnyFrame
from .config import InitialDistribution, Maxwellian, SimConfig, TwoTemperature, UniformBall


@dataclass
class ParticleEnsemble:
    """N equal-weight velocity samples of the rescaled distribution, owned by one worker at a time."""

    velocities: npt.NDArray[np.float64]
    """(N, 3) velocities in units of the initial thermal speed."""

    rng: np.random.Generator
    tau: float
    """Current value of the simulation clock."""

    weight: float = 1.0
    """Total mass, constant."""

    collisions: int = 0
    candidates: int = 0
    candidate_remainder: float = 0.0
    """Fractional candidate count carried over to the next collision step."""

    majorant_ratio: float | None = None
    """Soft kernels: the majorant as a multiple of the rate at the thermal speed."""

    @property
    def N(self) -> int:
        return int(self.velocities.shape[0])

    def energy(self) -> float:
        return float(np.einsum("ij,ij->", self.velocities, self.velocities))

    def momentum(self) -> npt.NDArray[np.float64]:
        result: npt.NDArray[np.float64] = self.velocities.sum(axis=0)
        return result

    def thermal_speed(self) -> float:
        """Root mean square of one velocity component."""
        return math.sqrt(self.energy() / (3.0 * self.N))


def replica_rng(seed: int, replica: int) -> np.random.Generator:
    """The independent stream of one replica, fixed by (seed, replica)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(replica,)))


def _sample(initial: InitialDistribution, n: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    if isinstance(initial, Maxwellian):
        return rng.normal(0.0, math.sqrt(0.5 / initial.beta), size=(n, 3))
    if isinstance(initial, UniformBall):
        directions = rng.normal(size=(n, 3))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        radii = initial.radius * rng.random(n) ** (1.0 / 3.0)
        result: npt.NDArray[np.float64] = directions * radii[:, None]
        return result
    if isinstance(initial, TwoTemperature):
        n_a = int(round(initial.fraction * n))
        if n_a == 0 or n_a == n:
            raise ConfigError(f"fraction {initial.fraction} leaves one population empty", "initial")
        a = rng.normal(0.0, math.sqrt(0.5 / initial.beta_a), size=(n_a, 3))
        b = rng.normal(0.0, math.sqrt(0.5 / initial.beta_b), size=(n - n_a, 3))
        return np.concatenate([a, b])
    raise ConfigError(f"Unknown initial distribution {initial!r}", "initial")


def init_ensemble(
    config: SimConfig,
    initial: InitialDistribution | None = None,
    replica: int = 0,
    frame: AnyFrame | None = None,
) -> ParticleEnsemble:
    """Sample the initial ensemble, then shift to zero mean and scale to the exact target beta.

    Velocities are sampled in physical units at `config.t_start` and mapped into the frame.
    """
    initial = initial if initial is not None else config.initial
    rng = replica_rng(config.seed, replica)
    velocities = _sample(initial, config.N, rng)
    velocities -= velocities.mean(axis=0)
    second = float(np.einsum("ij,ij->", velocities, velocities)) / config.N
    if second <= 0:
        raise ConfigError("Initial velocities are all equal", "initial")
    velocities *= math.sqrt(1.5 / (initial.target_beta * second))
    scale = frame.velocity_scale(config.t_start) if frame is not None else 1.0
    tau = frame.clock_of(config.t_start) if frame is not None else config.t_start
    return ParticleEnsemble(velocities=velocities * scale, rng=rng, tau=tau)


def norm_1_s(velocities: npt.NDArray[np.float64], s: float) -> float:
    """The moment norm <1 + |w|^s> of a unit-mass sample."""
    speeds = np.linalg.norm(velocities, axis=1)
    return float(np.mean(1.0 + speeds**s))


@dataclass(frozen=True)
class MomentSummary:
    """Moments of one ensemble in physical velocity units."""

    tau: float
    t: float
    mass: float
    mean: tuple[float, float, float]
    beta: float
    """3 / (2 <|w|^2>)."""

    pressure_offdiag: tuple[float, float, float]
    """<w_x w_y>, <w_x w_z>, <w_y w_z>."""

    fourth_cumulant: float
    """(3/5) <|w|^4> / <|w|^2>^2 - 1, zero for a Maxwellian."""

    norm_1_2: float
    collisions: int
    beta_stderr: float = 0.0
    c4_stderr: float = 0.0

    @property
    def temperature(self) -> float:
        """T = 1/(2 beta), so that the Maxwellian reads exp(-|w|^2 / (2T))."""
        return 1.0 / (2.0 * self.beta)


def summarize(ensemble: ParticleEnsemble, frame: AnyFrame) -> MomentSummary:
    t = frame.t_of(ensemble.tau)
    w = ensemble.velocities / frame.velocity_scale(t)
    n = ensemble.N
    sq = np.einsum("ij,ij->i", w, w)
    m2 = float(sq.mean())
    m4 = float((sq * sq).mean())
    c4 = 0.6 * m4 / (m2 * m2) - 1.0
    beta = 1.5 / m2
    # delta-method standard errors from the per-particle spread
    beta_stderr = beta * float(sq.std()) / (m2 * math.sqrt(n))
    influence = 0.6 * sq * sq / (m2 * m2) - 1.2 * m4 * sq / m2**3
    c4_stderr = float(influence.std()) / math.sqrt(n)
    mean = w.mean(axis=0)
    return MomentSummary(
        tau=ensemble.tau,
        t=t,
        mass=ensemble.weight,
        mean=(float(mean[0]), float(mean[1]), float(mean[2])),
        beta=beta,
        pressure_offdiag=(
            float(np.mean(w[:, 0] * w[:, 1])),
            float(np.mean(w[:, 0] * w[:, 2])),
            float(np.mean(w[:, 1] * w[:, 2])),
        ),
        fourth_cumulant=c4,
        norm_1_2=1.0 + m2,
        collisions=ensemble.collisions,
        beta_stderr=beta_stderr,
        c4_stderr=c4_stderr,
    )
