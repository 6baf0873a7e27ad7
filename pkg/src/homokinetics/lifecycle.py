from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .dsmc.config import SimConfig
    from .dsmc.ensemble import MomentSummary
    from .dsmc.series import TimeSeries
    from .usage import CollisionUsage


class SimulationHooks:
    """A class that receives callbacks on lifecycle events of a particle run. Subclass and override
    the methods you need.

    Replica callbacks run on the event loop, not on the worker threads that advance the ensembles.
    """

    async def on_run_start(self, config: SimConfig) -> None:
        """Called once, before any replica starts."""
        pass

    async def on_replica_start(self, config: SimConfig, replica: int) -> None:
        """Called just before a replica is handed to a worker thread."""
        pass

    async def on_replica_end(
        self,
        config: SimConfig,
        replica: int,
        rows: list[MomentSummary],
        usage: CollisionUsage,
    ) -> None:
        """Called when a replica has produced all its rows."""
        pass

    async def on_run_end(self, config: SimConfig, series: TimeSeries) -> None:
        """Called with the reduced series."""
        pass
