"""Scenario files: one JSON document with a flow, a kernel, a particle run and its analysis."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import ConfigDict, Field, TypeAdapter
from pydantic.dataclasses import dataclass

from .analysis import FitCoordinate
from .dsmc.config import FrameKind, InitialDistribution, Maxwellian, SimConfig, SimOverrides
from .exceptions import ConfigError
from .flow import FlowCase, FlowCaseTag, canonical_case, classify, make_flow
from .kernel import AngularDensity, KernelSpec
from .linop import BasisSpec, QuadratureBudget
from .util._json import validate_json

SCHEMA_VERSION = "homokinetics/1"

_STRICT = ConfigDict(extra="forbid")


@dataclass(frozen=True, config=_STRICT)
class MatrixFlow:
    matrix: Annotated[list[float], Field(min_length=9, max_length=9)]
    """A, row-major."""


@dataclass(frozen=True, config=_STRICT)
class CaseFlow:
    case: FlowCaseTag
    constants: dict[str, float] = Field(default_factory=dict)


@dataclass(frozen=True, config=_STRICT)
class KernelSection:
    gamma: Annotated[float, Field(ge=-3.0, le=2.0)]
    angular: AngularDensity = "constant"
    strength: Annotated[float, Field(gt=0.0)] = 1.0
    speed_floor: Annotated[float, Field(gt=0.0, lt=1.0)] = 1e-6


@dataclass(frozen=True, config=_STRICT)
class SimSection:
    duration: Annotated[float, Field(gt=0.0)]
    N: Annotated[int, Field(ge=2)] = 10_000
    dt_policy: Annotated[float, Field(gt=0.0, le=0.5)] = 0.1
    clock_ticks: Annotated[int, Field(ge=1)] = 2000
    output_stride: Annotated[int, Field(ge=1)] = 10
    seed: Annotated[int, Field(ge=0, lt=2**64)] = 0
    replicas: Annotated[int, Field(ge=1)] = 1
    initial: InitialDistribution = Field(default_factory=Maxwellian)
    frame: FrameKind = "scaled"
    t_start: Annotated[float, Field(ge=0.0)] = 0.0


@dataclass(frozen=True, config=_STRICT)
class AnalysisSection:
    column: str = "beta"
    decades: Annotated[float, Field(gt=0.0)] = 1.0
    coordinate: FitCoordinate | None = None
    """Fit coordinate; None follows the prediction."""

    window: tuple[float, float] | None = None
    tolerance: Annotated[float, Field(gt=0.0)] | None = None


@dataclass(frozen=True, config=_STRICT)
class LinopSection:
    radial_order: Annotated[int, Field(ge=0, le=8)] = 2
    angular_order: Annotated[int, Field(ge=2, le=6)] = 2
    initial_points: Annotated[int, Field(ge=64)] = 2**12
    max_points: Annotated[int, Field(ge=128)] = 2**20
    rtol: Annotated[float, Field(gt=0.0, lt=1.0)] = 1e-2


@dataclass(frozen=True, config=_STRICT)
class Scenario:
    schema: Literal["homokinetics/1"]
    name: Annotated[str, Field(min_length=1)]
    flow: Union[MatrixFlow, CaseFlow]
    kernel: KernelSection
    sim: SimSection
    analysis: AnalysisSection = Field(default_factory=AnalysisSection)
    linop: LinopSection = Field(default_factory=LinopSection)
    outputs: str = "out"
    """Directory for the CSV, report and operator files, relative to the working directory."""

    def flow_case(self) -> FlowCase:
        if isinstance(self.flow, MatrixFlow):
            return classify(make_flow(self.flow.matrix))
        return canonical_case(self.flow.case, **self.flow.constants)

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(
            gamma=self.kernel.gamma,
            angular=self.kernel.angular,
            strength=self.kernel.strength,
            speed_floor=self.kernel.speed_floor,
        )

    def sim_config(self, overrides: SimOverrides | None = None) -> SimConfig:
        sim = self.sim
        config = SimConfig(
            kernel=self.kernel_spec(),
            duration=sim.duration,
            case=self.flow_case(),
            N=sim.N,
            dt_policy=sim.dt_policy,
            clock_ticks=sim.clock_ticks,
            output_stride=sim.output_stride,
            seed=sim.seed,
            replicas=sim.replicas,
            initial=sim.initial,
            frame=sim.frame,
            t_start=sim.t_start,
            name=self.name,
        )
        return config.resolve(overrides)

    def basis(self) -> BasisSpec:
        return BasisSpec(
            radial_order=self.linop.radial_order, angular_order=self.linop.angular_order
        )

    def quadrature(self) -> QuadratureBudget:
        return QuadratureBudget(
            initial_points=self.linop.initial_points,
            max_points=self.linop.max_points,
            rtol=self.linop.rtol,
            seed=self.sim.seed,
        )

    @property
    def output_dir(self) -> Path:
        return Path(self.outputs)


_scenario_adapter = TypeAdapter(Scenario)


def parse_scenario(text: str) -> Scenario:
    """Validate scenario JSON text.

    Raises:
        ConfigError: With the dotted field path and line of the first problem.
    """
    return validate_json(text, _scenario_adapter)


def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    folder = resources.files("homokinetics") / "scenarios"
    return sorted(
        entry.name.removesuffix(".json")
        for entry in folder.iterdir()
        if entry.name.endswith(".json")
    )


def load_scenario(source: str | Path) -> Scenario:
    """Load a scenario from a path, or by name from the bundled scenarios."""
    path = Path(source)
    if path.exists():
        return parse_scenario(path.read_text())
    name = str(source).removesuffix(".json")
    bundled = resources.files("homokinetics") / "scenarios" / f"{name}.json"
    if not bundled.is_file():
        raise ConfigError(f"No scenario file or bundled scenario named {source!r}", "scenario")
    return parse_scenario(bundled.read_text())
