from .basis import BasisSpec, evaluate, gauss_hermite_grid, gram, project, quadratic
from .operator import (
    C0,
    GalerkinOperator,
    GreenKubo,
    QuadratureBudget,
    assemble,
    dump_operator,
    green_kubo_b,
    heating_rate,
    hilbert_h1,
    solve_on_W,
)

__all__ = [
    "BasisSpec",
    "C0",
    "GalerkinOperator",
    "GreenKubo",
    "QuadratureBudget",
    "assemble",
    "dump_operator",
    "evaluate",
    "gauss_hermite_grid",
    "gram",
    "green_kubo_b",
    "heating_rate",
    "hilbert_h1",
    "project",
    "quadratic",
    "solve_on_W",
]
