from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..util._pretty_print import pretty_print_series
from .ensemble import MomentSummary

CSV_COLUMNS = (
    "t",
    "tau",
    "beta",
    "T",
    "mean_x",
    "mean_y",
    "mean_z",
    "p_xy",
    "p_xz",
    "p_yz",
    "c4",
    "collisions",
    "mass",
    "norm_1_2",
    "beta_stderr",
    "c4_stderr",
)


@dataclass
class TimeSeries:
    """Moment rows ordered by physical time, with the run metadata."""

    rows: list[MomentSummary]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = [row.t for row in self.rows]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("TimeSeries rows must have strictly increasing t")

    def __str__(self) -> str:
        return pretty_print_series(self)

    def column(self, name: str) -> npt.NDArray[np.float64]:
        if name not in CSV_COLUMNS:
            raise ConfigError(f"Unknown column {name!r}", "column")
        return np.array([_row_values(row)[name] for row in self.rows], dtype=np.float64)


def _row_values(row: MomentSummary) -> dict[str, float]:
    return {
        "t": row.t,
        "tau": row.tau,
        "beta": row.beta,
        "T": row.temperature,
        "mean_x": row.mean[0],
        "mean_y": row.mean[1],
        "mean_z": row.mean[2],
        "p_xy": row.pressure_offdiag[0],
        "p_xz": row.pressure_offdiag[1],
        "p_yz": row.pressure_offdiag[2],
        "c4": row.fourth_cumulant,
        "collisions": row.collisions,
        "mass": row.mass,
        "norm_1_2": row.norm_1_2,
        "beta_stderr": row.beta_stderr,
        "c4_stderr": row.c4_stderr,
    }


def reduce_replicas(replicas: Sequence[Sequence[MomentSummary]]) -> list[MomentSummary]:
    """Average aligned rows across replicas.

    Standard errors combine the per-replica estimates, so they shrink as 1/sqrt(replicas).
    """
    count = len(replicas)
    lengths = {len(rows) for rows in replicas}
    if len(lengths) != 1:
        raise ValueError(f"Replicas emitted different row counts: {sorted(lengths)}")
    reduced = []
    for aligned in zip(*replicas):
        first = aligned[0]

        def mean_of(values: Sequence[float]) -> float:
            return math.fsum(values) / count

        reduced.append(
            MomentSummary(
                tau=first.tau,
                t=first.t,
                mass=mean_of([r.mass for r in aligned]),
                mean=(
                    mean_of([r.mean[0] for r in aligned]),
                    mean_of([r.mean[1] for r in aligned]),
                    mean_of([r.mean[2] for r in aligned]),
                ),
                beta=mean_of([r.beta for r in aligned]),
                pressure_offdiag=(
                    mean_of([r.pressure_offdiag[0] for r in aligned]),
                    mean_of([r.pressure_offdiag[1] for r in aligned]),
                    mean_of([r.pressure_offdiag[2] for r in aligned]),
                ),
                fourth_cumulant=mean_of([r.fourth_cumulant for r in aligned]),
                norm_1_2=mean_of([r.norm_1_2 for r in aligned]),
                collisions=sum(r.collisions for r in aligned),
                beta_stderr=math.sqrt(math.fsum(r.beta_stderr**2 for r in aligned)) / count,
                c4_stderr=math.sqrt(math.fsum(r.c4_stderr**2 for r in aligned)) / count,
            )
        )
    return reduced


def _format(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def series_to_csv(series: TimeSeries) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in series.rows:
        values = _row_values(row)
        writer.writerow([_format(values[name]) for name in CSV_COLUMNS])
    return buffer.getvalue()


def write_series_csv(series: TimeSeries, path: str | Path) -> Path:
    """Write the CSV and a `.json` sidecar with the metadata next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(series_to_csv(series))
    path.with_suffix(".json").write_text(json.dumps(series.metadata, indent=2, sort_keys=True))
    return path


def read_series_csv(path: str | Path) -> TimeSeries:
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ConfigError(f"{path} lacks columns {sorted(missing)}", "columns")
        rows = [
            MomentSummary(
                tau=float(record["tau"]),
                t=float(record["t"]),
                mass=float(record["mass"]),
                mean=(float(record["mean_x"]), float(record["mean_y"]), float(record["mean_z"])),
                beta=float(record["beta"]),
                pressure_offdiag=(
                    float(record["p_xy"]),
                    float(record["p_xz"]),
                    float(record["p_yz"]),
                ),
                fourth_cumulant=float(record["c4"]),
                norm_1_2=float(record["norm_1_2"]),
                collisions=int(record["collisions"]),
                beta_stderr=float(record["beta_stderr"]),
                c4_stderr=float(record["c4_stderr"]),
            )
            for record in reader
        ]
    sidecar = path.with_suffix(".json")
    metadata = json.loads(sidecar.read_text()) if sidecar.exists() else {}
    return TimeSeries(rows=rows, metadata=metadata)
