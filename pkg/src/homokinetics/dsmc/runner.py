from __future__ import annotations

import asyncio
from typing import Any

import numpy as np

from .._config import get_default_threads
from .._debug import LOG_STEPS
from ..exceptions import HomokineticsException, MajorantViolation, RunErrorDetails
from ..flow import AnyFrame
from ..lifecycle import SimulationHooks
from ..logger import logger
from ..tracing import ReplicaSpanData, replica_span
from ..usage import CollisionUsage
from .config import SimConfig, build_frame
from .ensemble import MomentSummary, ParticleEnsemble, init_ensemble, summarize
from .series import TimeSeries, reduce_replicas
from .steps import CandidateDraws, majorant, raise_majorant, step_collisions, step_transport

MAX_MAJORANT_RETRIES = 60


def _advance(
    e: ParticleEnsemble,
    frame: AnyFrame,
    config: SimConfig,
    x_end: float,
    usage: CollisionUsage,
) -> None:
    kernel = config.kernel
    while e.tau < x_end:
        remaining = x_end - e.tau
        if remaining <= 1e-13 * max(1.0, abs(x_end)):
            e.tau = x_end
            break

        pair_majorant, _ = majorant(e, kernel)
        frequency = frame.rate(e.tau) * pair_majorant * (e.N - 1) / e.N
        drift = float(np.linalg.norm(frame.drift(e.tau), 2))
        dtau = remaining
        if frequency + drift > 0:
            dtau = min(remaining, config.dt_policy / (frequency + drift))
        mu_mid = frame.rate(e.tau + 0.5 * dtau)

        step_transport(e, frame, dtau)
        pair_majorant, floor = majorant(e, kernel)
        draws = CandidateDraws()
        retries = 0
        while True:
            try:
                step_collisions(e, kernel, mu_mid, dtau, pair_majorant, floor, draws)
                break
            except MajorantViolation as violation:
                retries += 1
                usage.majorant_retries += 1
                if kernel.gamma >= 0 or retries > MAX_MAJORANT_RETRIES:
                    raise
                raise_majorant(e, kernel, violation)
                pair_majorant, floor = majorant(e, kernel)

        e.tau = x_end if dtau == remaining else e.tau + dtau
        usage.steps += 1
        if LOG_STEPS:
            logger.debug(
                f"tau={e.tau:.6g} dtau={dtau:.3g} majorant={pair_majorant:.4g} "
                f"collisions={e.collisions}"
            )


def simulate_replica(
    config: SimConfig, frame: AnyFrame, replica: int
) -> tuple[list[MomentSummary], CollisionUsage]:
    """Advance one replica over the shared output clock, emitting a row every `output_stride` ticks."""
    e = init_ensemble(config, replica=replica, frame=frame)
    usage = CollisionUsage()
    ticks = np.linspace(e.tau, config.duration, config.clock_ticks + 1)
    rows = [summarize(e, frame)]
    span_data = ReplicaSpanData(config.name, replica, config.N)
    with replica_span(span_data):
        try:
            for index in range(1, len(ticks)):
                _advance(e, frame, config, float(ticks[index]), usage)
                if index % config.output_stride == 0 or index == len(ticks) - 1:
                    rows.append(summarize(e, frame))
        except HomokineticsException as exc:
            exc.run_data = RunErrorDetails(
                scenario=config.name,
                replica=replica,
                tau=e.tau,
                steps=usage.steps,
                collisions=e.collisions,
            )
            raise
        finally:
            usage.candidates = e.candidates
            usage.collisions = e.collisions
            span_data.rows = len(rows)
            span_data.steps = usage.steps
            span_data.collisions = e.collisions
    return rows, usage


def _metadata(config: SimConfig, frame: AnyFrame, usage: CollisionUsage) -> dict[str, Any]:
    return {
        "scenario": config.name,
        "config_hash": config.fingerprint(),
        "seed": config.seed,
        "replicas": config.replicas,
        "particles": config.N,
        "frame": frame.label,
        "case": config.case.to_json() if config.case is not None else None,
        "kernel": {
            "gamma": config.kernel.gamma,
            "angular": config.kernel.angular,
            "strength": config.kernel.strength,
        },
        "usage": {
            "steps": usage.steps,
            "candidates": usage.candidates,
            "collisions": usage.collisions,
            "majorant_retries": usage.majorant_retries,
        },
    }


class Runner:
    @classmethod
    async def run(
        cls,
        config: SimConfig,
        *,
        hooks: SimulationHooks | None = None,
        max_workers: int | None = None,
    ) -> TimeSeries:
        """Simulate every replica of `config` and reduce them to one series.

        Replicas run on worker threads, at most `max_workers` at a time (default: the
        HOMOKINETICS_THREADS setting). Each replica owns its ensemble and RNG stream, so the result
        does not depend on scheduling.

        Args:
            config: The simulation settings.
            hooks: Callbacks for lifecycle events.
            max_workers: Cap on concurrently simulated replicas.

        Returns:
            The replica-averaged moment history.
        """
        hooks = hooks or SimulationHooks()
        frame = build_frame(config)
        semaphore = asyncio.Semaphore(max_workers or get_default_threads())
        await hooks.on_run_start(config)
        logger.info(
            f"Simulating {config.name}: {config.replicas} replica(s) of {config.N} particles, "
            f"{frame.label} frame"
        )

        async def one(replica: int) -> tuple[list[MomentSummary], CollisionUsage]:
            async with semaphore:
                await hooks.on_replica_start(config, replica)
                rows, usage = await asyncio.to_thread(simulate_replica, config, frame, replica)
                await hooks.on_replica_end(config, replica, rows, usage)
                return rows, usage

        results = await asyncio.gather(*(one(replica) for replica in range(config.replicas)))
        total = CollisionUsage()
        for _, usage in results:
            total.add(usage)
        series = TimeSeries(
            rows=reduce_replicas([rows for rows, _ in results]),
            metadata=_metadata(config, frame, total),
        )
        logger.info(
            f"Finished {config.name}: {total.collisions} collisions, "
            f"acceptance {total.acceptance:.3f}, {total.majorant_retries} majorant retries"
        )
        await hooks.on_run_end(config, series)
        return series

    @classmethod
    def run_sync(
        cls,
        config: SimConfig,
        *,
        hooks: SimulationHooks | None = None,
        max_workers: int | None = None,
    ) -> TimeSeries:
        """
        Run a simulation synchronously.

        Note:
            This wraps the `run` method with `asyncio.run`, so it will not work inside a running
            event loop. Use `run` there instead.
        """
        return asyncio.run(cls.run(config, hooks=hooks, max_workers=max_workers))


def run(config: SimConfig) -> TimeSeries:
    return Runner.run_sync(config)
