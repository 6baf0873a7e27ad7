from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass as std_dataclass
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
import numpy.typing as npt
from pydantic import Field
from pydantic.dataclasses import dataclass
from scipy import special
from scipy.stats import qmc

from .._config import get_default_threads
from .._debug import LOG_QUADRATURE
from ..exceptions import CompatibilityError, DomainError, QuadratureBudgetExceeded
from ..flow import as_matrix
from ..kernel import KernelSpec, omega_from_uniforms
from ..logger import logger
from ..tracing import AssemblySpanData, assembly_span
from .basis import BasisSpec, evaluate, project, quadratic, weighted_norm2

Coefficients = npt.NDArray[np.float64]

C0 = math.pi**-1.5
"""Mass normalization of the unit Gaussian G0 = C0 exp(-|xi|^2)."""

# (1/4) * integral of exp(-2|G|^2 - |V|^2/2) dG dV
_WEAK_FORM_SCALE = math.pi**3 / 4.0
_UNIFORM_CLIP = 1e-12
_COMPATIBILITY_FACTOR = 10.0


@dataclass(frozen=True)
class QuadratureBudget:
    initial_points: Annotated[int, Field(ge=64)] = 2**12
    """Sobol points of the first estimate, rounded up to a power of two."""

    max_points: Annotated[int, Field(ge=128)] = 2**20
    """Budget after which assembly gives up."""

    rtol: Annotated[float, Field(gt=0.0, lt=1.0)] = 1e-2
    """Target quad_error relative to the largest matrix entry."""

    seed: Annotated[int, Field(ge=0)] = 0
    """Seed of the Sobol scrambling, so assembly is reproducible."""

    chunk: Annotated[int, Field(ge=64)] = 2**12
    """Points evaluated per worker task."""


@std_dataclass(frozen=True, eq=False)
class GalerkinOperator:
    """The matrix M_jk = <psi_j, L psi_k>_w of the linearized collision operator."""

    matrix: npt.NDArray[np.float64]
    invariant_projector: npt.NDArray[np.float64]
    quad_error: float
    """Largest entry change over the last budget doubling."""

    basis: BasisSpec
    kernel: KernelSpec
    points: int
    coarse_matrix: npt.NDArray[np.float64]
    """The estimate at half the final budget, kept for error bars of derived constants."""

    @property
    def complement(self) -> npt.NDArray[np.intp]:
        """Coordinates spanning the complement W of the collision invariants."""
        keep = np.diag(self.invariant_projector) == 0
        return np.flatnonzero(keep)

    def eigenvalues(self) -> npt.NDArray[np.float64]:
        """Eigenvalues of -M, ascending."""
        result: npt.NDArray[np.float64] = np.linalg.eigvalsh(-self.matrix)
        return result


@std_dataclass(frozen=True)
class GreenKubo:
    """b = <xi.L0 xi, (-L)^-1 xi.L0 xi>_w for one kernel."""

    value: float
    error: float
    """Change of b between the last two quadrature budgets."""

    gamma: float
    angular: str

    def to_json(self) -> dict[str, Any]:
        return {"b": self.value, "error": self.error, "gamma": self.gamma, "angular": self.angular}


def _collision_sums(
    kernel: KernelSpec, basis: BasisSpec, u: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """Sum over points of B * Delta psi_j * Delta psi_k.

    The first six coordinates of `u` give the centre of mass G ~ N(0, I/4) and the relative velocity
    V ~ N(0, I), the last two the scattering direction.
    """
    u = np.clip(u, _UNIFORM_CLIP, 1.0 - _UNIFORM_CLIP)
    G = 0.5 * special.ndtri(u[:, 0:3])
    V = special.ndtri(u[:, 3:6])
    omega = omega_from_uniforms(kernel, V, u[:, 6], u[:, 7])
    V_post = V - 2.0 * np.einsum("ij,ij->i", V, omega)[:, None] * omega

    delta = (
        evaluate(basis, G - 0.5 * V_post)
        + evaluate(basis, G + 0.5 * V_post)
        - evaluate(basis, G - 0.5 * V)
        - evaluate(basis, G + 0.5 * V)
    )
    weights = kernel.strength * np.linalg.norm(V, axis=1) ** kernel.gamma
    result: npt.NDArray[np.float64] = (delta * weights[:, None]).T @ delta
    return result


def _accumulate(
    kernel: KernelSpec, basis: BasisSpec, u: npt.NDArray[np.float64], chunk: int
) -> npt.NDArray[np.float64]:
    starts = range(0, u.shape[0], chunk)
    with ThreadPoolExecutor(max_workers=get_default_threads()) as pool:
        parts = list(
            pool.map(lambda start: _collision_sums(kernel, basis, u[start : start + chunk]), starts)
        )
    # summed in chunk order, independent of scheduling
    result: npt.NDArray[np.float64] = np.sum(parts, axis=0)
    return result


def assemble(
    kernel: KernelSpec, basis: BasisSpec, quad: QuadratureBudget | None = None
) -> GalerkinOperator:
    """Assemble the linearized collision operator on `basis`.

    Entries use the symmetric weak form
    <phi, -L psi>_w = (1/4) * integral of exp(-|xi|^2 - |xi*|^2) B Delta phi Delta psi,
    sampled at scrambled Sobol points with the Gaussian factors absorbed into the sampling. The
    budget doubles until successive estimates agree to `quad.rtol`.

    Args:
        kernel: The collision kernel.
        basis: The Galerkin basis.
        quad: The quadrature budget. Defaults to `QuadratureBudget()`.

    Returns:
        The assembled operator.

    Raises:
        QuadratureBudgetExceeded: If the target error is not met within `quad.max_points`.
    """
    quad = quad or QuadratureBudget()
    sobol = qmc.Sobol(d=8, scramble=True, seed=quad.seed)
    span_data = AssemblySpanData(kernel.gamma, kernel.angular, basis.size)
    with assembly_span(span_data):
        n = 2 ** math.ceil(math.log2(quad.initial_points))
        total = _accumulate(kernel, basis, sobol.random(n), quad.chunk)
        previous = -_WEAK_FORM_SCALE * total / n
        while True:
            if 2 * n > quad.max_points:
                raise QuadratureBudgetExceeded(
                    f"Operator entries did not settle to rtol {quad.rtol} within "
                    f"{quad.max_points} points"
                )
            total = total + _accumulate(kernel, basis, sobol.random(n), quad.chunk)
            n *= 2
            current = -_WEAK_FORM_SCALE * total / n
            error = float(np.max(np.abs(current - previous)))
            span_data.points = n
            span_data.quad_error = error
            if LOG_QUADRATURE:
                logger.debug(f"Assembly with {n} points: quad_error={error:.3g}")
            if error <= quad.rtol * float(np.max(np.abs(current))):
                break
            previous = current

    return GalerkinOperator(
        matrix=0.5 * (current + current.T),
        invariant_projector=basis.invariant_projector(),
        quad_error=error,
        basis=basis,
        kernel=kernel,
        points=n,
        coarse_matrix=0.5 * (previous + previous.T),
    )


def _pseudo_inverse_apply(
    matrix: npt.NDArray[np.float64],
    keep: npt.NDArray[np.intp],
    rhs: Coefficients,
    floor: float,
) -> Coefficients:
    block = -matrix[np.ix_(keep, keep)]
    values, vectors = np.linalg.eigh(block)
    inverse = np.zeros_like(values)
    resolved = values > floor
    inverse[resolved] = 1.0 / values[resolved]
    solution = np.zeros_like(rhs)
    solution[keep] = vectors @ (inverse * (vectors.T @ rhs[keep]))
    return solution


def _check_compatible(op: GalerkinOperator, rhs: Coefficients) -> None:
    leak = float(np.linalg.norm(op.invariant_projector @ rhs))
    if leak > _COMPATIBILITY_FACTOR * op.quad_error:
        raise CompatibilityError(
            f"Right-hand side has a collision-invariant component of size {leak:.3g}"
        )


def solve_on_W(op: GalerkinOperator, rhs: npt.ArrayLike) -> Coefficients:
    """Solve (-L) H = rhs for H orthogonal to the collision invariants.

    Eigenvalues of -L below 10 * quad_error are treated as unresolved and dropped.

    Raises:
        CompatibilityError: If rhs is not orthogonal to the collision invariants.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape != (op.basis.size,):
        raise DomainError(f"Expected {op.basis.size} coefficients, got shape {rhs.shape}")
    _check_compatible(op, rhs)
    return _pseudo_inverse_apply(
        op.matrix, op.complement, rhs, _COMPATIBILITY_FACTOR * op.quad_error
    )


def _quadratic_coefficients(basis: BasisSpec, M: npt.NDArray[np.float64]) -> Coefficients:
    target = quadratic(M)
    coefficients = project(basis, target)
    missing = weighted_norm2(target) - float(coefficients @ coefficients)
    if missing > 1e-10 * max(1.0, weighted_norm2(target)):
        raise DomainError(f"{basis} does not contain the quadratic xi.M xi; use angular_order >= 2")
    return coefficients


def green_kubo_b(op: GalerkinOperator, L0: npt.ArrayLike) -> GreenKubo:
    """The Green-Kubo constant b of a traceless leading matrix.

    Raises:
        CompatibilityError: If Tr(L0) is not zero.
    """
    L0 = as_matrix(L0)
    if abs(np.trace(L0)) > 1e-12:
        raise CompatibilityError(f"b needs a traceless L0, got trace {np.trace(L0):.3g}")
    rhs = _quadratic_coefficients(op.basis, L0)
    floor = _COMPATIBILITY_FACTOR * op.quad_error
    value = float(rhs @ solve_on_W(op, rhs))
    coarse = float(rhs @ _pseudo_inverse_apply(op.coarse_matrix, op.complement, rhs, floor))
    return GreenKubo(
        value=value,
        error=abs(value - coarse),
        gamma=op.kernel.gamma,
        angular=op.kernel.angular,
    )


def hilbert_h1(
    op: GalerkinOperator,
    gamma: float,
    mu_now: float,
    beta_now: float,
    Q_now: npt.ArrayLike,
    form: Literal["traceless", "exponential"] = "traceless",
) -> Coefficients:
    """First Hilbert correction H1 = -(2 beta^{gamma/2} / (C0 mu)) (-L)^-1 [xi.Q xi].

    `form="traceless"` needs Tr(Q) = 0. `form="exponential"` first removes lambda0 = Tr(Q)/3, which
    leaves the traceless part of Q as the source.
    """
    Q = as_matrix(Q_now)
    if mu_now <= 0 or beta_now <= 0:
        raise DomainError(f"mu and beta must be positive, got mu={mu_now}, beta={beta_now}")
    trace = float(np.trace(Q))
    if form == "traceless" and abs(trace) > 1e-12:
        raise CompatibilityError(f"Traceless form needs Tr(Q) = 0, got {trace:.3g}")
    source = Q - (trace / 3.0) * np.eye(3)
    rhs = _quadratic_coefficients(op.basis, source)
    scale = 2.0 * beta_now ** (gamma / 2.0) / (C0 * mu_now)
    return -scale * solve_on_W(op, rhs)


def heating_rate(op: GalerkinOperator, h1: npt.ArrayLike, Q: npt.ArrayLike) -> float:
    """<xi.Q xi, G0 H1> / integral of |xi|^2 G0, the value of beta_t / (2 beta) set by H1."""
    coefficients = project(op.basis, quadratic(as_matrix(Q)))
    return float(C0 * (coefficients @ np.asarray(h1, dtype=np.float64)) / 1.5)


def dump_operator(op: GalerkinOperator, path: str | Path) -> Path:
    """Write the matrix as CSV and its metadata as a `.json` sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, op.matrix, delimiter=",", fmt="%.17g")
    metadata = {
        "radial_order": op.basis.radial_order,
        "angular_order": op.basis.angular_order,
        "indices": [list(index) for index in op.basis.indices],
        "quad_error": op.quad_error,
        "points": op.points,
        "kernel": {
            "gamma": op.kernel.gamma,
            "angular": op.kernel.angular,
            "strength": op.kernel.strength,
        },
    }
    path.with_suffix(".json").write_text(json.dumps(metadata, indent=2))
    return path
