"""
Simple Shear Heating
====================

Runs the particle solver on a scaled-down copy of the bundled simple shear scenario (hard
spheres, gamma = 1). Shear heats the gas, so beta = 3/(2<|w|^2>) decays, and at long times
the Hilbert expansion predicts beta ~ C t^-2. The script fits the last decade and compares.

Set HOMOKINETICS_THREADS in .env to control how many replicas run at once.
"""

import asyncio

from rich.console import Console

from homokinetics import (
    Runner,
    SimConfig,
    SimOverrides,
    SimulationHooks,
    compare,
    fit_power_law,
    load_scenario,
    predict,
    write_series_csv,
)

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass  # dotenv not installed, will use system environment variables

console = Console()


class ProgressHooks(SimulationHooks):
    async def on_replica_start(self, config: SimConfig, replica: int) -> None:
        console.print(f"▶️  replica {replica + 1}/{config.replicas} started")

    async def on_replica_end(self, config, replica, rows, usage) -> None:
        console.print(
            f"✅ replica {replica + 1}/{config.replicas}: {usage.collisions:,} collisions, "
            f"acceptance {usage.acceptance:.2f}"
        )


async def main():
    console.print("=" * 80)
    console.print("🔥 Simple shear, hard spheres")
    console.print("=" * 80)

    scenario = load_scenario("simple_shear_gamma1")
    config = scenario.sim_config(SimOverrides(replicas=2, N=5000, duration=40.0))
    prediction = predict(scenario.flow_case(), scenario.kernel.gamma)
    console.print(f"Predicted: beta ~ C t^{prediction.exponent_expr} ({prediction.validity})\n")

    series = await Runner.run(config, hooks=ProgressHooks())
    path = write_series_csv(series, scenario.output_dir / "example.csv")
    console.print(f"\n💾 Wrote {len(series.rows)} rows to {path}")

    fit = fit_power_law(series, decades=1.0)
    report = compare(prediction, fit)
    console.print(f"\n{fit}")
    verdict = "[green]pass[/green]" if report.passed else "[red]fail[/red]"
    console.print(
        f"\nFitted slope {fit.slope:.3f} vs predicted {prediction.beta_exponent:g} "
        f"(tolerance {report.tolerance:.2g}): {verdict}"
    )
    console.print("\n🚀 Full-size run: homokinetics simulate simple_shear_gamma1\n")


if __name__ == "__main__":
    asyncio.run(main())
