"""
Temperature Moment Equations
============================

Along a Hilbert expansion, beta obeys the scalar equation beta_t = -(8/3) b beta^(1+gamma/2) / mu(t),
plus a dilatation term when the flow also expands. This example integrates it for simple shear
at two homogeneities and for simple shear with decaying dilatation, and shows how fast each one
approaches its power law.
"""

import numpy as np
from rich.console import Console
from rich.table import Table

from homokinetics import beta_ode, canonical_case, predict

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass  # dotenv not installed, will use system environment variables

console = Console()

B = 0.4

CASES = [
    # (case, gamma, mu(t))
    (canonical_case("SimpleShear", K=1.0), 1.0, lambda t: 1.0),
    (canonical_case("SimpleShear", K=1.0), 2.0, lambda t: 1.0),
    (
        canonical_case("SimpleShearDecayingDilatation", K1=0.0, K2=1.0, K3=0.0),
        1.0,
        lambda t: 1.0 / t,
    ),
]


def main():
    console.print("=" * 80)
    console.print("📉 Moment equations for beta")
    console.print("=" * 80)

    grid = np.geomspace(1.0, 1e4, 9)
    for case, gamma, mu in CASES:
        prediction = predict(case, gamma, B, prefactor=True)
        trajectory = beta_ode(case, gamma, B, mu, 1.0, grid)

        table = Table(title=f"{case.tag}, gamma={gamma:g}: beta ~ {prediction.prefactor:.4g} t^{prediction.exponent_expr}")
        table.add_column("t", justify="right")
        table.add_column("beta (ODE)", justify="right")
        table.add_column("leading law", justify="right")
        table.add_column("ratio", justify="right")
        for t, beta in zip(trajectory.t, trajectory.beta):
            law = prediction.prefactor * t**prediction.beta_exponent
            table.add_row(f"{t:.3g}", f"{beta:.5g}", f"{law:.5g}", f"{beta / law:.4f}")
        console.print(table)
        console.print()


if __name__ == "__main__":
    main()
