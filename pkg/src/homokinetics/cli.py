"""Command-line entry point: `homokinetics <subcommand>`.

Exit status is 0 on success, 2 for invalid input and 3 when a numerical method fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, get_args

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .analysis import FitResult, compare, fit_power_law, write_report
from .dsmc import Runner, SimConfig, SimOverrides, TimeSeries, read_series_csv, write_series_csv
from .dsmc.ensemble import MomentSummary
from .exceptions import HomokineticsException, NumericalFailure
from .flow import FlowCaseTag, canonical_case, classify, make_flow, scaled_decomposition
from .hilbert import predict
from .kernel import AngularDensity, KernelSpec
from .lifecycle import SimulationHooks
from .linop import BasisSpec, QuadratureBudget, assemble, dump_operator, green_kubo_b
from .logger import logger
from .scenario import Scenario, bundled_scenarios, load_scenario
from .usage import CollisionUsage
from .version import __version__

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_DEFAULT_CONSTANTS: dict[FlowCaseTag, dict[str, float]] = {
    "HomogeneousDilatation": {},
    "CylindricalDilatation": {"K": 0.0},
    "CylindricalDilatationShear": {"K": 1.0},
    "PlanarShear": {"K": 0.0},
    "SimpleShear": {"K": 1.0},
    "SimpleShearDecayingDilatation": {"K1": 0.0, "K2": 1.0, "K3": 0.0},
    "CombinedOrthogonalShear": {"K1": 1.0, "K2": 0.0, "K3": 1.0},
}

console = Console()


class ConsoleHooks(SimulationHooks):
    """Reports replica progress on the console."""

    def __init__(self, console: Console):
        self.console = console

    async def on_replica_end(
        self,
        config: SimConfig,
        replica: int,
        rows: list[MomentSummary],
        usage: CollisionUsage,
    ) -> None:
        self.console.print(
            f"[green]✓[/green] replica {replica + 1}/{config.replicas}: {len(rows)} rows, "
            f"{usage.collisions} collisions"
        )


def _print_json(payload: Any) -> None:
    console.print_json(json.dumps(payload))


def _constants(pairs: Sequence[str] | None, tag: FlowCaseTag) -> dict[str, float]:
    constants = dict(_DEFAULT_CONSTANTS[tag])
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"Expected NAME=VALUE, got {pair!r}")
        constants[key.strip()] = float(value)
    return constants


def _output_dir(args: argparse.Namespace, scenario: Scenario | None = None) -> Path:
    if args.out is not None:
        return Path(args.out)
    if scenario is not None:
        return scenario.output_dir
    return Path("out")


def cmd_classify(args: argparse.Namespace) -> int:
    case = classify(make_flow(args.matrix))
    _print_json(case.to_json())
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    config = scenario.sim_config(SimOverrides(seed=args.seed, replicas=args.replicas))
    hooks = None if args.quiet else ConsoleHooks(console)
    series = Runner.run_sync(config, hooks=hooks)
    path = write_series_csv(series, _output_dir(args, scenario) / f"{scenario.name}.csv")
    if not args.quiet:
        console.print(f"Wrote {len(series.rows)} rows to [bold]{path}[/bold]")
    return EXIT_OK


def cmd_linop_b(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    case = scenario.flow_case()
    op = assemble(scenario.kernel_spec(), scenario.basis(), scenario.quadrature())
    result = green_kubo_b(op, scaled_decomposition(case).L0)
    out = _output_dir(args, scenario)
    dump_operator(op, out / f"{scenario.name}_operator.csv")
    _print_json({"case": case.tag, **result.to_json()})
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    case = canonical_case(args.case, **_constants(args.constant, args.case))
    b = args.b
    if args.with_b is not None:
        radial_order, angular_order = args.with_b
        kernel = KernelSpec(gamma=args.gamma, angular=args.angular, strength=args.strength)
        op = assemble(
            kernel,
            BasisSpec(radial_order=radial_order, angular_order=angular_order),
            QuadratureBudget(seed=args.seed or 0),
        )
        b = green_kubo_b(op, scaled_decomposition(case).L0).value
    prediction = predict(case, args.gamma, b, prefactor=b is not None)
    _print_json(prediction.to_json())
    return EXIT_OK


def _fit(series: TimeSeries, args: argparse.Namespace, scenario: Scenario | None) -> FitResult:
    analysis = scenario.analysis if scenario is not None else None
    column = args.column or (analysis.column if analysis else "beta")
    decades = args.decades or (analysis.decades if analysis else 1.0)
    window = tuple(args.window) if args.window else (analysis.window if analysis else None)
    return fit_power_law(
        series, column, window, decades=decades, coordinate=args.coordinate  # type: ignore[arg-type]
    )


def cmd_fit(args: argparse.Namespace) -> int:
    args.coordinate = args.coordinate or "t"
    fit = _fit(read_series_csv(args.csv), args, None)
    _print_json(fit.to_json())
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    prediction = predict(scenario.flow_case(), scenario.kernel.gamma, args.b, prefactor=False)
    if args.coordinate is None:
        args.coordinate = scenario.analysis.coordinate or prediction.coordinate
    fit = _fit(read_series_csv(args.csv), args, scenario)
    report = compare(prediction, fit, scenario.analysis.tolerance)
    path = write_report(report, _output_dir(args, scenario) / f"{scenario.name}_report.json")

    if not args.quiet:
        table = Table(title=f"{scenario.name} ({prediction.case.tag}, gamma={prediction.gamma})")
        table.add_column("quantity")
        table.add_column("value", justify="right")
        table.add_row("regime", prediction.regime)
        table.add_row("predicted exponent", f"{prediction.beta_exponent:.6g}")
        table.add_row("fitted slope", f"{fit.slope:.6g} ± {fit.stderr:.2g}")
        table.add_row("tolerance", f"{report.tolerance:.3g}")
        if report.prefactor_ratio is not None:
            table.add_row("prefactor ratio", f"{report.prefactor_ratio:.3f}")
        table.add_row("result", "[green]pass[/green]" if report.passed else "[red]fail[/red]")
        console.print(table)
        console.print(f"Wrote [bold]{path}[/bold]")
    return EXIT_OK


def _configure_logging(args: argparse.Namespace) -> None:
    if args.verbose:
        from . import enable_verbose_stdout_logging

        enable_verbose_stdout_logging()
        return
    logger.setLevel(logging.WARNING if args.quiet else logging.INFO)
    if not any(isinstance(handler, RichHandler) for handler in logger.handlers):
        logger.addHandler(RichHandler(console=Console(stderr=True), show_path=False))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Override the RNG seed.")
    common.add_argument("--out", type=str, default=None, help="Output directory.")
    common.add_argument(
        "--replicas", type=int, default=None, help="Override the number of replicas."
    )
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("--quiet", action="store_true", help="Only print results and errors.")
    noise.add_argument("--verbose", action="store_true", help="Log everything to stdout.")

    parser = argparse.ArgumentParser(
        prog="homokinetics",
        description="Particle simulation and long-time temperature laws of homoenergetic flows.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    classify_cmd = commands.add_parser(
        "classify", parents=[common], help="Classify a deformation matrix A."
    )
    classify_cmd.add_argument(
        "--matrix", type=float, nargs=9, required=True, metavar="A", help="A, row-major."
    )
    classify_cmd.set_defaults(handler=cmd_classify)

    scenario_help = f"Scenario file, or one of: {', '.join(bundled_scenarios())}."

    simulate_cmd = commands.add_parser(
        "simulate", parents=[common], help="Run the particle solver on a scenario."
    )
    simulate_cmd.add_argument("scenario", help=scenario_help)
    simulate_cmd.set_defaults(handler=cmd_simulate)

    linop_cmd = commands.add_parser(
        "linop-b", parents=[common], help="Assemble the linearized operator and compute b."
    )
    linop_cmd.add_argument("scenario", help=scenario_help)
    linop_cmd.set_defaults(handler=cmd_linop_b)

    predict_cmd = commands.add_parser(
        "predict", parents=[common], help="Predict the long-time law of beta."
    )
    predict_cmd.add_argument("--case", choices=get_args(FlowCaseTag), required=True)
    predict_cmd.add_argument("--gamma", type=float, required=True)
    predict_cmd.add_argument(
        "--constant",
        action="append",
        metavar="NAME=VALUE",
        help="A constant of the case, e.g. K=1. Repeatable.",
    )
    b_source = predict_cmd.add_mutually_exclusive_group()
    b_source.add_argument("--b", type=float, default=None, help="The Green-Kubo constant.")
    b_source.add_argument(
        "--with-b",
        type=int,
        nargs=2,
        metavar=("RADIAL", "ANGULAR"),
        default=None,
        help="Compute b on a basis of the given radial and angular orders.",
    )
    predict_cmd.add_argument("--angular", choices=get_args(AngularDensity), default="constant")
    predict_cmd.add_argument("--strength", type=float, default=1.0)
    predict_cmd.set_defaults(handler=cmd_predict)

    for name, handler, description in (
        ("fit", cmd_fit, "Fit a power law to a column of a series CSV."),
        ("report", cmd_report, "Compare a series CSV with the scenario's prediction."),
    ):
        sub = commands.add_parser(name, parents=[common], help=description)
        sub.add_argument("csv", help="Series CSV written by `simulate`.")
        if name == "report":
            sub.add_argument("scenario", help=scenario_help)
            sub.add_argument("--b", type=float, default=None, help="The Green-Kubo constant.")
        sub.add_argument("--column", default=None)
        sub.add_argument("--coordinate", choices=("t", "tau"), default=None)
        sub.add_argument("--decades", type=float, default=None)
        sub.add_argument("--window", type=float, nargs=2, default=None, metavar=("T0", "T1"))
        sub.set_defaults(handler=handler)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        from dotenv import load_dotenv

        load_dotenv()
    except ImportError:
        pass

    args = build_parser().parse_args(argv)
    _configure_logging(args)
    err = Console(stderr=True)
    try:
        code: int = args.handler(args)
        return code
    except NumericalFailure as e:
        err.print(f"[red]Numerical failure:[/red] {e}")
        if e.run_data is not None:
            err.print(str(e.run_data))
        return EXIT_NUMERICAL
    except (HomokineticsException, ValidationError, argparse.ArgumentTypeError) as e:
        err.print(f"[red]Error:[/red] {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
