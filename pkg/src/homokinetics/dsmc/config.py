from __future__ import annotations

import hashlib
import json
from dataclasses import fields, replace
from typing import Annotated, Any, Literal, Union

from pydantic import ConfigDict, Field
from pydantic.dataclasses import dataclass

from ..exceptions import ConfigError
from ..flow import AnyFrame, DilatationFrame, FlowCase, RestFrame, scaled_decomposition
from ..kernel import KernelSpec


@dataclass(frozen=True, config=ConfigDict(extra="forbid"))
class Maxwellian:
    kind: Literal["maxwellian"] = "maxwellian"
    beta: Annotated[float, Field(gt=0.0)] = 1.0
    """Inverse temperature scale of the Gaussian, exp(-beta |w|^2)."""

    @property
    def target_beta(self) -> float:
        return self.beta


@dataclass(frozen=True, config=ConfigDict(extra="forbid"))
class UniformBall:
    kind: Literal["uniform_ball"] = "uniform_ball"
    radius: Annotated[float, Field(gt=0.0)] = 1.0

    @property
    def target_beta(self) -> float:
        # <|w|^2> = 3 r^2 / 5 for the uniform ball
        return 5.0 / (2.0 * self.radius**2)


@dataclass(frozen=True, config=ConfigDict(extra="forbid"))
class TwoTemperature:
    """Two Maxwellian populations at beta_a and beta_b, the first holding `fraction` of the mass."""

    kind: Literal["two_temperature"] = "two_temperature"
    beta_a: Annotated[float, Field(gt=0.0)] = 1.0
    beta_b: Annotated[float, Field(gt=0.0)] = 4.0
    fraction: Annotated[float, Field(gt=0.0, lt=1.0)] = 0.5

    @property
    def target_beta(self) -> float:
        return 1.0 / (self.fraction / self.beta_a + (1.0 - self.fraction) / self.beta_b)


InitialDistribution = Annotated[
    Union[Maxwellian, UniformBall, TwoTemperature], Field(discriminator="kind")
]

FrameKind = Literal["scaled", "dilatation"]


@dataclass(frozen=True, config=ConfigDict(arbitrary_types_allowed=True))
class SimConfig:
    """Settings of one particle simulation, shared by all its replicas."""

    kernel: KernelSpec
    """The collision kernel."""

    duration: Annotated[float, Field(gt=0.0)]
    """Final value of the simulation clock (tau, or s in the dilatation frame)."""

    case: FlowCase | None = None
    """The deformation. None simulates the undeformed homogeneous equation (Q = 0, mu = 1)."""

    N: Annotated[int, Field(ge=2)] = 10_000
    """Particle count per replica."""

    dt_policy: Annotated[float, Field(gt=0.0, le=0.5)] = 0.1
    """Largest fraction of the majorant collision time covered by one substep."""

    clock_ticks: Annotated[int, Field(ge=1)] = 2000
    """Equal ticks of the shared output clock between the start and `duration`."""

    output_stride: Annotated[int, Field(ge=1)] = 10
    """Ticks between emitted moment rows."""

    seed: Annotated[int, Field(ge=0, lt=2**64)] = 0
    replicas: Annotated[int, Field(ge=1)] = 1
    initial: InitialDistribution = Field(default_factory=Maxwellian)
    frame: FrameKind = "scaled"
    """`scaled` integrates the g-tilde equation in tau; `dilatation` the s-variable form."""

    t_start: Annotated[float, Field(ge=0.0)] = 0.0
    """Physical time at which the run starts. Must be positive for the Linear scaling."""

    name: str = "run"

    def resolve(self, override: SimOverrides | None) -> SimConfig:
        """Produce a new SimConfig by overlaying any non-None values from the override on top of this
        instance."""
        if override is None:
            return self

        changes = {
            field.name: getattr(override, field.name)
            for field in fields(override)
            if getattr(override, field.name) is not None
        }
        return replace(self, **changes)

    def fingerprint(self) -> str:
        """A stable hash of every setting that influences the simulated numbers."""
        payload: dict[str, Any] = {
            "kernel": [
                self.kernel.gamma,
                self.kernel.angular,
                self.kernel.strength,
                self.kernel.speed_floor,
            ],
            "case": self.case.to_json() if self.case is not None else None,
            "N": self.N,
            "dt_policy": self.dt_policy,
            "duration": self.duration,
            "clock_ticks": self.clock_ticks,
            "output_stride": self.output_stride,
            "seed": self.seed,
            "replicas": self.replicas,
            "initial": repr(self.initial),
            "frame": self.frame,
            "t_start": self.t_start,
        }
        encoded = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(encoded).hexdigest()[:16]


@dataclass(frozen=True)
class SimOverrides:
    """Command-line style overrides applied with `SimConfig.resolve`."""

    seed: int | None = None
    replicas: int | None = None
    N: int | None = None
    duration: float | None = None


def build_frame(config: SimConfig) -> AnyFrame:
    """The simulation frame of a config, with its clock start checked against `duration`."""
    frame: AnyFrame
    if config.case is None:
        if config.frame != "scaled":
            raise ConfigError("The dilatation frame needs a HomogeneousDilatation case", "frame")
        frame = RestFrame()
    else:
        decomposition = scaled_decomposition(config.case)
        if decomposition.l_tag == "Linear" and config.t_start <= 0:
            raise ConfigError(
                f"{config.case.tag} uses tau = t^2/2 and needs t_start > 0", "t_start"
            )
        if config.frame == "dilatation":
            if config.case.tag != "HomogeneousDilatation" or config.kernel.gamma > -2:
                raise ConfigError(
                    "The dilatation frame needs HomogeneousDilatation with gamma <= -2", "frame"
                )
            frame = DilatationFrame(decomposition, config.kernel.gamma)
        else:
            frame = decomposition
    start = frame.clock_of(config.t_start)
    if config.duration <= start:
        raise ConfigError(
            f"duration {config.duration} must exceed the starting clock value {start:.6g}",
            "duration",
        )
    return frame
