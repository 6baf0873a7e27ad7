"""
Classifying Homoenergetic Flows
===============================

Every deformation matrix A whose flow L(t) = A(I + tA)^-1 exists for all t >= 0 settles into one
of seven canonical long-time forms. This example classifies a handful of matrices, including a
rotated shear and one whose flow blows up in finite time, and prints what the solver would do
with each of them.
"""

import numpy as np
from rich.console import Console
from rich.table import Table

from homokinetics import (
    DegenerateFlow,
    FiniteHorizon,
    UnclassifiableFlow,
    classify,
    density,
    make_flow,
    predict,
)

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass  # dotenv not installed, will use system environment variables

console = Console()


def rotated_shear(K: float, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    R = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    A = np.zeros((3, 3))
    A[0, 1] = K
    return R @ A @ R.T


MATRICES = {
    "expansion in all directions": np.eye(3),
    "expansion in a plane": np.diag([1.0, 1.0, 0.0]),
    "simple shear": np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
    "shear seen at 30 degrees": rotated_shear(2.0, np.pi / 6),
    "shear plus stretching": np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
    "orthogonal shears": np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]),
    "compression": -np.eye(3),
    "rotation": np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
}

GAMMAS = (-3.0, -1.0, 0.0, 1.0, 2.0)


def main():
    console.print("=" * 80)
    console.print("🌀 Homoenergetic flow classification")
    console.print("=" * 80)

    table = Table(title="Canonical forms")
    table.add_column("flow")
    table.add_column("case")
    table.add_column("constants")
    table.add_column("rho(10)", justify="right")
    for gamma in GAMMAS:
        table.add_column(f"gamma={gamma:g}")

    for label, A in MATRICES.items():
        try:
            flow = make_flow(A)
            case = classify(flow)
        except FiniteHorizon as e:
            console.print(f"⚠️  {label}: {e}")
            continue
        except (DegenerateFlow, UnclassifiableFlow) as e:
            console.print(f"⚠️  {label}: not classified ({e})")
            continue

        laws = []
        for gamma in GAMMAS:
            prediction = predict(case, gamma)
            if prediction.is_power_law:
                unit = "tau" if prediction.coordinate == "tau" else "t"
                laws.append(f"{prediction.exponent_expr} ({unit})")
            else:
                laws.append(prediction.label)

        constants = ", ".join(f"{k}={v:.3g}" for k, v in case.constants.items()) or "-"
        table.add_row(label, case.tag, constants, f"{density(flow, 1.0, 10.0):.3g}", *laws)

    console.print(table)
    console.print(
        "\nColumns per gamma give the exponent of beta(t) (or of beta in tau = log(1+t)) where a "
        "Hilbert expansion holds, and the regime label otherwise."
    )


if __name__ == "__main__":
    main()
