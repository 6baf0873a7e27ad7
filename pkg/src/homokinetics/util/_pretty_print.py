from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..analysis import FitResult
    from ..dsmc.series import TimeSeries
    from ..exceptions import RunErrorDetails


def _indent(text: str, indent_level: int) -> str:
    indent_string = "  " * indent_level
    return "\n".join(f"{indent_string}{line}" for line in text.splitlines())


def pretty_print_run_error_details(details: "RunErrorDetails") -> str:
    output = "RunErrorDetails:"
    output += f'\n- Scenario: "{details.scenario}"'
    output += f"\n- Replica: {details.replica}"
    output += f"\n- Stopped at tau={details.tau:.6g} after {details.steps} step(s)"
    output += f"\n- {details.collisions} collision(s)"
    output += "\n(See `RunErrorDetails` for more details)"

    return output


def pretty_print_series(series: "TimeSeries") -> str:
    output = "TimeSeries:"
    output += f"\n- {len(series.rows)} row(s)"
    if series.rows:
        first, last = series.rows[0], series.rows[-1]
        output += f"\n- t in [{first.t:.6g}, {last.t:.6g}]"
        output += f"\n- beta {first.beta:.6g} -> {last.beta:.6g}"
    output += f"\n- Metadata:\n{_indent(str(series.metadata), 2)}"
    output += "\n(See `TimeSeries.rows` for the moment history)"

    return output


def pretty_print_fit(fit: "FitResult") -> str:
    output = "FitResult:"
    output += f"\n- Slope: {fit.slope:.6g} +/- {fit.stderr:.2g}"
    output += f"\n- Window: [{fit.window[0]:.6g}, {fit.window[1]:.6g}] ({fit.points} point(s))"
    output += f"\n- R^2: {fit.r_squared:.6f}"

    return output
