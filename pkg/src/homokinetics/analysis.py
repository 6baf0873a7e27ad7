from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

import numpy as np
from scipy import stats

from .dsmc.series import TimeSeries
from .exceptions import InsufficientData, NonPositiveValues, RegimeMismatch
from .hilbert import Prediction
from .logger import logger
from .tracing import FitSpanData, fit_span
from .util._pretty_print import pretty_print_fit

FitCoordinate = Literal["t", "tau"]

MIN_FIT_POINTS = 20
PREFACTOR_BAND = (0.7, 1.3)


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of log(column) against log(t), or against log(1+t) for `tau`."""

    column: str
    coordinate: FitCoordinate
    slope: float
    stderr: float
    intercept: float
    window: tuple[float, float]
    """Range of t covered by the fitted rows."""

    r_squared: float
    points: int

    def __str__(self) -> str:
        return pretty_print_fit(self)

    def to_json(self) -> dict[str, Any]:
        return {
            "column": self.column,
            "coordinate": self.coordinate,
            "slope": self.slope,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "window": list(self.window),
            "r_squared": self.r_squared,
            "points": self.points,
        }


def fit_power_law(
    series: TimeSeries,
    column: str = "beta",
    window: tuple[float, float] | None = None,
    *,
    decades: float = 1.0,
    coordinate: FitCoordinate = "t",
) -> FitResult:
    """Fit column ~ C t^p over a window of the series.

    The default window is the last `decades` decades of t. With `coordinate="tau"` the regressor is
    tau = log(1+t), so an exponential law C e^{a tau} comes out with slope a.

    Raises:
        InsufficientData: If the window holds fewer than 20 rows.
        NonPositiveValues: If a fitted value is not positive.
    """
    t = series.column("t")
    y = series.column(column)
    if window is None:
        t_max = float(t[-1]) if t.size else 0.0
        window = (max(float(t[0]) if t.size else 0.0, t_max * 10.0**-decades), t_max)
    selected = (t >= window[0]) & (t <= window[1])
    if coordinate == "t":
        selected &= t > 0

    span_data = FitSpanData(column, coordinate)
    with fit_span(span_data):
        count = int(selected.sum())
        span_data.points = count
        if count < MIN_FIT_POINTS:
            raise InsufficientData(
                f"Window [{window[0]:.6g}, {window[1]:.6g}] holds {count} rows, "
                f"need {MIN_FIT_POINTS}"
            )
        values = y[selected]
        if np.any(values <= 0):
            raise NonPositiveValues(f"Column {column!r} has non-positive values in the window")
        x = np.log1p(t[selected]) if coordinate == "tau" else np.log(t[selected])
        result = stats.linregress(x, np.log(values))
        span_data.slope = float(result.slope)

    return FitResult(
        column=column,
        coordinate=coordinate,
        slope=float(result.slope),
        stderr=float(result.stderr),
        intercept=float(result.intercept),
        window=(float(t[selected][0]), float(t[selected][-1])),
        r_squared=float(result.rvalue) ** 2,
        points=count,
    )


@dataclass(frozen=True)
class ComparisonReport:
    prediction: Prediction
    fit: FitResult
    tolerance: float
    passed: bool
    prefactor_ratio: float | None = None
    """Measured prefactor exp(intercept) over the predicted C. Under t -> c t the fitted intercept
    shifts by -p log(c), so the ratio picks up a factor c^-p."""

    def to_json(self) -> dict[str, Any]:
        return {
            "prediction": self.prediction.to_json(),
            "fit": self.fit.to_json(),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "prefactor_ratio": self.prefactor_ratio,
        }


def default_tolerance(exponent: float) -> float:
    return max(0.1 * abs(exponent), 0.1)


def compare(
    prediction: Prediction, fit: FitResult, tolerance: float | None = None
) -> ComparisonReport:
    """Check a fitted exponent against a predicted law.

    Raises:
        RegimeMismatch: If the prediction has no law to compare with.
    """
    if not prediction.is_power_law or prediction.beta_exponent is None:
        raise RegimeMismatch(
            f"{prediction.case.tag} at gamma={prediction.gamma} is {prediction.label}, "
            "no law to compare with"
        )
    exponent = prediction.beta_exponent
    tolerance = default_tolerance(exponent) if tolerance is None else tolerance
    passed = abs(fit.slope - exponent) <= tolerance

    ratio = None
    if prediction.prefactor is not None and fit.coordinate == "t":
        ratio = math.exp(fit.intercept) / prediction.prefactor
        low, high = PREFACTOR_BAND
        if not low <= ratio <= high:
            logger.warning(
                f"Measured prefactor is {ratio:.3f} times the leading law; the o(1) corrections "
                "may not have decayed"
            )
    logger.info(
        f"{fit.column} slope {fit.slope:.4f} +/- {fit.stderr:.2g} vs predicted {exponent:.4f}: "
        f"{'pass' if passed else 'fail'}"
    )
    return ComparisonReport(
        prediction=prediction,
        fit=fit,
        tolerance=tolerance,
        passed=passed,
        prefactor_ratio=ratio,
    )


def write_report(report: ComparisonReport, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_json(), indent=2))
    return path
