"""Sonine-harmonic basis psi_{n,l,m}(xi) = N_nl L_n^{(l+1/2)}(|xi|^2) |xi|^l Y_lm(xi/|xi|).

The family is orthonormal under <f, g>_w = integral of f g exp(-|xi|^2). Y_lm are the real spherical
harmonics. Projections of polynomial targets use a tensor Gauss-Hermite rule, exact up to degree
2 * nodes - 1.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from typing import Annotated

import numpy as np
import numpy.typing as npt
from numpy.polynomial.hermite import hermgauss
from pydantic import Field
from pydantic.dataclasses import dataclass
from scipy import special

from ..exceptions import DomainError

Points = npt.NDArray[np.float64]
Target = Callable[[Points], npt.NDArray[np.float64]]

BasisIndex = tuple[int, int, int]
"""(n, l, m): radial index, degree and order."""

DEFAULT_NODES = 16


@dataclass(frozen=True)
class BasisSpec:
    radial_order: Annotated[int, Field(ge=0, le=8)] = 2
    """Largest Sonine index n."""

    angular_order: Annotated[int, Field(ge=0, le=6)] = 2
    """Largest spherical-harmonic degree l."""

    @property
    def indices(self) -> tuple[BasisIndex, ...]:
        return tuple(
            (n, ell, m)
            for n in range(self.radial_order + 1)
            for ell in range(self.angular_order + 1)
            for m in range(-ell, ell + 1)
        )

    @property
    def size(self) -> int:
        return len(self.indices)

    def index(self, n: int, ell: int, m: int) -> int:
        try:
            return self.indices.index((n, ell, m))
        except ValueError:
            raise DomainError(f"psi_({n},{ell},{m}) is not in {self}") from None

    @property
    def invariant_indices(self) -> tuple[int, ...]:
        """Coordinates of the collision invariants 1, xi and |xi|^2 that the basis contains."""
        wanted = [(0, 0, 0), (1, 0, 0), (0, 1, -1), (0, 1, 0), (0, 1, 1)]
        return tuple(self.indices.index(key) for key in wanted if key in self.indices)

    def invariant_projector(self) -> npt.NDArray[np.float64]:
        diagonal = np.zeros(self.size)
        diagonal[list(self.invariant_indices)] = 1.0
        return np.diag(diagonal)


def _radial_norm(n: int, ell: int) -> float:
    return math.sqrt(2.0 * math.factorial(n) / math.gamma(n + ell + 1.5))


def _real_harmonic(ell: int, m: int, cos_theta: Points, phi: Points) -> Points:
    k = abs(m)
    norm = math.sqrt(
        (2 * ell + 1) / (4.0 * math.pi) * math.factorial(ell - k) / math.factorial(ell + k)
    )
    legendre = special.lpmv(k, ell, cos_theta)
    if m == 0:
        result: Points = norm * legendre
    elif m > 0:
        result = math.sqrt(2.0) * norm * legendre * np.cos(k * phi)
    else:
        result = math.sqrt(2.0) * norm * legendre * np.sin(k * phi)
    return result


def evaluate(basis: BasisSpec, xi: npt.ArrayLike) -> Points:
    """All basis functions at the rows of `xi`, shape (points, basis.size)."""
    xi = np.asarray(xi, dtype=np.float64)
    r2 = np.einsum("ij,ij->i", xi, xi)
    r = np.sqrt(r2)
    safe = np.where(r > 0, r, 1.0)
    cos_theta = np.clip(np.where(r > 0, xi[:, 2] / safe, 1.0), -1.0, 1.0)
    phi = np.arctan2(xi[:, 1], xi[:, 0])

    harmonics = {
        (ell, m): _real_harmonic(ell, m, cos_theta, phi)
        for ell in range(basis.angular_order + 1)
        for m in range(-ell, ell + 1)
    }
    radial = {
        (n, ell): _radial_norm(n, ell) * special.eval_genlaguerre(n, ell + 0.5, r2) * r**ell
        for n in range(basis.radial_order + 1)
        for ell in range(basis.angular_order + 1)
    }
    return np.stack([radial[n, ell] * harmonics[ell, m] for n, ell, m in basis.indices], axis=1)


def gauss_hermite_grid(nodes: int = DEFAULT_NODES) -> tuple[Points, npt.NDArray[np.float64]]:
    """Tensor nodes and weights for integrals against exp(-|xi|^2) over R^3."""
    x, w = hermgauss(nodes)
    grid = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)
    weights = np.einsum("i,j,k->ijk", w, w, w).reshape(-1)
    return grid, weights


def project(
    basis: BasisSpec, target: Target, nodes: int = DEFAULT_NODES
) -> npt.NDArray[np.float64]:
    """Coefficients <psi_k, target>_w."""
    grid, weights = gauss_hermite_grid(nodes)
    values = np.asarray(target(grid), dtype=np.float64)
    result: npt.NDArray[np.float64] = evaluate(basis, grid).T @ (weights * values)
    return result


def weighted_norm2(target: Target, nodes: int = DEFAULT_NODES) -> float:
    grid, weights = gauss_hermite_grid(nodes)
    values = np.asarray(target(grid), dtype=np.float64)
    return float(weights @ (values * values))


def gram(basis: BasisSpec, nodes: int = DEFAULT_NODES) -> npt.NDArray[np.float64]:
    """The matrix <psi_j, psi_k>_w, the identity up to rounding."""
    grid, weights = gauss_hermite_grid(nodes)
    values = evaluate(basis, grid)
    result: npt.NDArray[np.float64] = values.T @ (weights[:, None] * values)
    return result


def quadratic(M: npt.ArrayLike) -> Target:
    """The target xi . M xi."""
    matrix = np.asarray(M, dtype=np.float64)

    def target(xi: Points) -> npt.NDArray[np.float64]:
        result: npt.NDArray[np.float64] = np.einsum("ij,jk,ik->i", xi, matrix, xi)
        return result

    return target
