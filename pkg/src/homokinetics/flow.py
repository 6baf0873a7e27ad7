"""Deformation matrices L(t) = A(I+tA)^-1 of homoenergetic flows.

A flow is built from its matrix A with `make_flow`, classified into one of the seven long-time cases with
`classify`, and rescaled with `scaled_decomposition` into the data (l, L0, mu, Q) that the particle solver
and the asymptotic laws work with. All objects here are immutable.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Literal, Protocol, Union

import numpy as np
import numpy.typing as npt
from scipy import linalg

from .exceptions import DegenerateFlow, DomainError, FiniteHorizon, UnclassifiableFlow
from .logger import logger

Matrix3 = npt.NDArray[np.float64]
"""A 3x3 real matrix, units 1/time."""

FlowCaseTag = Literal[
    "HomogeneousDilatation",
    "CylindricalDilatation",
    "CylindricalDilatationShear",
    "PlanarShear",
    "SimpleShear",
    "SimpleShearDecayingDilatation",
    "CombinedOrthogonalShear",
]

ScalingTag = Literal["Linear", "Constant", "Inverse"]

CASE_CONSTANTS: dict[FlowCaseTag, tuple[str, ...]] = {
    "HomogeneousDilatation": (),
    "CylindricalDilatation": ("K",),
    "CylindricalDilatationShear": ("K",),
    "PlanarShear": ("K",),
    "SimpleShear": ("K",),
    "SimpleShearDecayingDilatation": ("K1", "K2", "K3"),
    "CombinedOrthogonalShear": ("K1", "K2", "K3"),
}

_RANK_RTOL = 1e-9
_VERIFY_TIMES = (1e3, 1e6)
_VERIFY_TOL = 1e-4
_IDENTITY = np.eye(3)


def as_matrix(A: npt.ArrayLike) -> Matrix3:
    """Coerce a 3x3 matrix or a row-major 9-vector to a float array, rejecting non-finite entries."""
    matrix = np.array(A, dtype=np.float64)
    if matrix.shape == (9,):
        matrix = matrix.reshape(3, 3)
    if matrix.shape != (3, 3):
        raise DomainError(f"Expected a 3x3 matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DomainError("Matrix entries must be finite")
    return matrix


@dataclass(frozen=True, eq=False)
class FlowPath:
    """The family L(t) = A(I+tA)^-1, the unique solution of dL/dt + L^2 = 0 with L(0) = A."""

    A: Matrix3
    """The initial deformation matrix."""

    horizon: float
    """Supremum of the times T with det(I+tA) > 0 on [0, T). Infinite for admissible flows."""

    def _check_time(self, t: float) -> None:
        if t < 0:
            raise DomainError(f"Time must be nonnegative, got {t}")
        if t >= self.horizon:
            raise FiniteHorizon(f"t={t} is past the flow horizon {self.horizon}", self.horizon)

    def L(self, t: float) -> Matrix3:
        self._check_time(t)
        result: Matrix3 = np.linalg.solve(_IDENTITY + t * self.A, self.A)
        return result

    def det(self, t: float) -> float:
        self._check_time(t)
        return float(np.linalg.det(_IDENTITY + t * self.A))

    def trace_integral(self, t: float) -> float:
        """Closed form of the integral of Tr L over [0, t], which is log det(I+tA)."""
        self._check_time(t)
        sign, logdet = np.linalg.slogdet(_IDENTITY + t * self.A)
        if sign <= 0:
            raise FiniteHorizon(f"det(I+tA) is not positive at t={t}", self.horizon)
        return float(logdet)

    def propagator(self, t0: float, t1: float) -> Matrix3:
        """Exact solution operator of dw/dt = -L(t)w from t0 to t1: (I+t1 A)^-1 (I+t0 A)."""
        if t1 < t0:
            raise DomainError(f"Propagation runs forward in time, got t0={t0} > t1={t1}")
        self._check_time(t0)
        self._check_time(t1)
        result: Matrix3 = np.linalg.solve(_IDENTITY + t1 * self.A, _IDENTITY + t0 * self.A)
        return result


def _horizon(A: Matrix3) -> float:
    # det(I+tA) = prod(1 + t*lambda); only real negative eigenvalues produce a zero.
    scale = max(float(np.linalg.norm(A, 2)), 1.0)
    horizon = math.inf
    for eigenvalue in np.linalg.eigvals(A):
        if abs(eigenvalue.imag) <= 1e-12 * scale and eigenvalue.real < -1e-12 * scale:
            horizon = min(horizon, -1.0 / eigenvalue.real)
    return horizon


def make_flow(A: npt.ArrayLike) -> FlowPath:
    matrix = as_matrix(A)
    if not np.any(matrix):
        raise DegenerateFlow("A = 0 gives L(t) = 0 for all t")
    return FlowPath(A=matrix, horizon=_horizon(matrix))


def density(flow: FlowPath, rho0: float, t: float) -> float:
    """Density at time t: rho0 * exp(-integral of Tr L) = rho0 / det(I+tA)."""
    if rho0 <= 0:
        raise DomainError(f"Initial density must be positive, got {rho0}")
    return rho0 * math.exp(-flow.trace_integral(t))


@dataclass(frozen=True, eq=False)
class FlowCase:
    """One of the seven long-time canonical forms of L(t), with the basis that exhibits it.

    The columns of `basis` are the orthonormal vectors e1, e2, e3. In that basis the classified flow has
    matrix `basis.T @ A @ basis`.
    """

    tag: FlowCaseTag
    constants: Mapping[str, float] = field(default_factory=dict)
    basis: Matrix3 = field(default_factory=lambda: np.eye(3))
    source: FlowPath | None = None
    """The classified flow, in the original coordinates. None for a case built from constants."""

    def __post_init__(self) -> None:
        expected = CASE_CONSTANTS[self.tag]
        if set(self.constants) != set(expected):
            raise DomainError(
                f"{self.tag} takes constants {list(expected)}, got {sorted(self.constants)}"
            )
        c = self.constants
        if self.tag == "SimpleShear" and c["K"] == 0:
            raise DomainError("SimpleShear needs K != 0")
        if self.tag == "CylindricalDilatation" and c["K"] != 0:
            raise DomainError("CylindricalDilatation has K = 0, use CylindricalDilatationShear")
        if self.tag == "CylindricalDilatationShear" and c["K"] == 0:
            raise DomainError("CylindricalDilatationShear needs K != 0")
        if self.tag == "SimpleShearDecayingDilatation" and c["K2"] == 0:
            raise DomainError("SimpleShearDecayingDilatation needs K2 != 0")
        if self.tag == "CombinedOrthogonalShear" and c["K1"] * c["K3"] == 0:
            raise DomainError("CombinedOrthogonalShear needs K1*K3 != 0")

    def canonical_flow(self) -> FlowPath:
        """The exact flow expressed in the canonical basis."""
        if self.source is not None:
            return make_flow(self.basis.T @ self.source.A @ self.basis)
        return make_flow(canonical_matrix(self.tag, self.constants))

    def leading(self, t: float) -> Matrix3:
        """The canonical asymptotic form of L(t) in the canonical basis."""
        return _leading_form(self.tag, self.constants, t)

    def to_json(self) -> dict[str, object]:
        return {
            "tag": self.tag,
            "constants": dict(self.constants),
            "basis": [float(x) for x in self.basis.reshape(-1)],
        }


def canonical_case(tag: FlowCaseTag, **constants: float) -> FlowCase:
    """Build a case directly from its tag and constants, in the standard basis."""
    if tag == "CylindricalDilatation":
        constants.setdefault("K", 0.0)
    return FlowCase(tag=tag, constants={k: float(v) for k, v in constants.items()})


def _projector_matrix(tag: FlowCaseTag, K: float) -> Matrix3:
    if tag in ("CylindricalDilatation", "CylindricalDilatationShear"):
        return np.array([[1.0, 0.0, K], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    return np.array([[0.0, 0.0, 0.0], [0.0, 0.0, K], [0.0, 0.0, 1.0]])


def _shear_parts(constants: Mapping[str, float]) -> tuple[Matrix3, Matrix3]:
    K1, K2, K3 = constants["K1"], constants["K2"], constants["K3"]
    L0 = np.zeros((3, 3))
    L0[0, 1] = K2
    L1 = np.array([[0.0, K1 * K3, K1], [0.0, 0.0, 0.0], [0.0, K3, 1.0]])
    return L0, L1


def _orthogonal_shear(constants: Mapping[str, float]) -> Matrix3:
    K1, K2, K3 = constants["K1"], constants["K2"], constants["K3"]
    return np.array([[0.0, K3, K2], [0.0, 0.0, K1], [0.0, 0.0, 0.0]])


def canonical_matrix(tag: FlowCaseTag, constants: Mapping[str, float]) -> Matrix3:
    """A whose exact flow is the canonical form of `tag`, with 1/(t+1) in place of 1/t."""
    if tag == "HomogeneousDilatation":
        return np.eye(3)
    if tag in ("CylindricalDilatation", "CylindricalDilatationShear", "PlanarShear"):
        return _projector_matrix(tag, constants["K"])
    if tag == "SimpleShear":
        A = np.zeros((3, 3))
        A[0, 1] = constants["K"]
        return A
    if tag == "SimpleShearDecayingDilatation":
        L0, L1 = _shear_parts(constants)
        return L0 + L1
    return _orthogonal_shear(constants)


def _leading_form(tag: FlowCaseTag, constants: Mapping[str, float], t: float) -> Matrix3:
    if tag == "HomogeneousDilatation":
        return np.eye(3) / t
    if tag in ("CylindricalDilatation", "CylindricalDilatationShear", "PlanarShear"):
        return _projector_matrix(tag, constants["K"]) / t
    if tag == "SimpleShear":
        return canonical_matrix(tag, constants)
    if tag == "SimpleShearDecayingDilatation":
        L0, L1 = _shear_parts(constants)
        return L0 + L1 / t
    M = _orthogonal_shear(constants)
    return M - t * (M @ M)


def _rank(M: Matrix3, scale: float) -> int:
    singular = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(singular > _RANK_RTOL * scale))


def _range_projector(A: Matrix3, scale: float) -> Matrix3:
    """Spectral projector onto the nonzero-eigenvalue part: range(A^3) along ker(A^3)."""
    A3 = A @ A @ A
    U, s, Vt = np.linalg.svd(A3)
    r = int(np.sum(s > _RANK_RTOL * scale**3))
    X = U[:, :r]
    Y = Vt[:r].T
    result: Matrix3 = X @ np.linalg.solve(Y.T @ X, Y.T)
    return result


def _cylindrical_basis(P: Matrix3) -> tuple[Matrix3, float]:
    U, _, _ = np.linalg.svd(P)
    e3 = U[:, 2]
    image = P @ e3
    K = float(np.linalg.norm(image))
    e1 = image / K if K > _RANK_RTOL else U[:, 0]
    e2 = np.cross(e3, e1)
    return np.column_stack([e1, e2, e3]), K


def _planar_basis(P: Matrix3) -> tuple[Matrix3, float]:
    _, _, Vt = np.linalg.svd(P)
    e3 = Vt[0]
    image = P @ e3
    normal = float(image @ e3)
    tangent = image - normal * e3
    K = float(np.linalg.norm(tangent)) / normal
    e2 = tangent / np.linalg.norm(tangent) if K > _RANK_RTOL else Vt[1]
    e1 = np.cross(e2, e3)
    return np.column_stack([e1, e2, e3]), K


def _rank_one_basis(N: Matrix3) -> tuple[Matrix3, float]:
    U, s, Vt = np.linalg.svd(N)
    e1, e2 = U[:, 0], Vt[0]
    return np.column_stack([e1, e2, np.cross(e1, e2)]), float(s[0])


def _decaying_dilatation_basis(A: Matrix3, P: Matrix3) -> tuple[Matrix3, dict[str, float]]:
    N = A @ (_IDENTITY - P)
    R, K2 = _rank_one_basis(N)
    L1 = R.T @ P @ R
    K1, K3 = float(L1[0, 2]), float(L1[2, 1])
    if K1 < -_RANK_RTOL or (abs(K1) <= _RANK_RTOL and K3 < 0):
        R = R @ np.diag([-1.0, -1.0, 1.0])
        K1, K3 = -K1, -K3
    return R, {"K1": K1, "K2": K2, "K3": K3}


def _orthogonal_shear_basis(A: Matrix3) -> tuple[Matrix3, dict[str, float]]:
    _, _, Vt = np.linalg.svd(A)
    e1 = Vt[2]
    _, _, Vt2 = np.linalg.svd(A @ A)
    candidates = [v - (v @ e1) * e1 for v in Vt2[1:]]
    e2 = max(candidates, key=lambda v: float(np.linalg.norm(v)))
    e2 = e2 / np.linalg.norm(e2)
    R = np.column_stack([e1, e2, np.cross(e1, e2)])
    M = R.T @ A @ R
    if M[0, 1] < 0:
        R[:, 1] *= -1
        M = R.T @ A @ R
    if M[1, 2] < 0:
        R[:, 2] *= -1
        M = R.T @ A @ R
    return R, {"K1": float(M[1, 2]), "K2": float(M[0, 2]), "K3": float(M[0, 1])}


def _verify(case: FlowCase, flow: FlowPath) -> None:
    for t in _VERIFY_TIMES:
        rotated = case.basis.T @ flow.L(t) @ case.basis
        lead = case.leading(t)
        err = float(np.linalg.norm(rotated - lead)) / max(float(np.linalg.norm(lead)), 1e-300)
        tolerance = _VERIFY_TOL * _VERIFY_TIMES[-1] / t
        if err > tolerance:
            raise UnclassifiableFlow(
                f"{case.tag} form does not match L(t) at t={t:g}: relative error {err:.3g}"
            )


def classify(flow: FlowPath) -> FlowCase:
    """Find the canonical case, constants and orthonormal basis of an admissible flow."""
    if math.isfinite(flow.horizon):
        raise FiniteHorizon("Only flows defined for all t >= 0 are classified", flow.horizon)
    A = flow.A
    scale = float(np.linalg.norm(A, 2))
    eigenvalues = np.linalg.eigvals(A)
    if np.any(np.abs(eigenvalues.imag) > 1e-9 * scale):
        raise UnclassifiableFlow(f"A has complex eigenvalues {eigenvalues}")

    zero_multiplicity = 3 - _rank(A @ A @ A, scale**3)
    rank_a = _rank(A, scale)
    constants: dict[str, float]
    tag: FlowCaseTag

    if zero_multiplicity == 0:
        tag, basis, constants = "HomogeneousDilatation", np.eye(3), {}
    elif zero_multiplicity == 1:
        basis, K = _cylindrical_basis(_range_projector(A, scale))
        if K <= _RANK_RTOL:
            tag, constants = "CylindricalDilatation", {"K": 0.0}
        else:
            tag, constants = "CylindricalDilatationShear", {"K": K}
    elif zero_multiplicity == 2 and rank_a == 1:
        basis, K = _planar_basis(_range_projector(A, scale))
        tag, constants = "PlanarShear", {"K": K if K > _RANK_RTOL else 0.0}
    elif zero_multiplicity == 2:
        tag = "SimpleShearDecayingDilatation"
        basis, constants = _decaying_dilatation_basis(A, _range_projector(A, scale))
    elif _rank(A @ A, scale**2) == 0:
        basis, K = _rank_one_basis(A)
        tag, constants = "SimpleShear", {"K": K}
    else:
        tag = "CombinedOrthogonalShear"
        basis, constants = _orthogonal_shear_basis(A)

    case = FlowCase(tag=tag, constants=constants, basis=basis, source=flow)
    _verify(case, flow)
    logger.debug(f"Classified flow as {tag} with constants {constants}")
    return case


def _canonical_propagator(case: FlowCase, t0: float, t1: float) -> Matrix3:
    c = case.constants
    dt = t1 - t0
    if case.tag == "SimpleShear":
        return _IDENTITY - dt * canonical_matrix(case.tag, c)
    if case.tag == "CombinedOrthogonalShear":
        K1, K2, K3 = c["K1"], c["K2"], c["K3"]
        corner = K1 * K3 * dt**2 / 2 - K2 * dt + K1 * K3 * (t1**2 - t0**2) / 2
        return np.array([[1.0, -K3 * dt, corner], [0.0, 1.0, -K1 * dt], [0.0, 0.0, 1.0]])
    if t0 <= 0:
        raise DomainError(f"The canonical {case.tag} form is singular at t=0, got t0={t0}")
    if case.tag == "SimpleShearDecayingDilatation":
        # L0 and L1 annihilate each other, so the two exponentials factor.
        L0, L1 = _shear_parts(c)
        return _IDENTITY - dt * L0 + (t0 / t1 - 1.0) * L1
    M = _leading_form(case.tag, c, 1.0)
    result: Matrix3 = linalg.expm(-math.log(t1 / t0) * M)
    return result


def propagate(
    source: FlowPath | FlowCase, t0: float, t1: float, w: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Solve dw/dt = -L(t)w exactly from t0 to t1.

    For a `FlowCase` the canonical form is used and `w` is read in the canonical basis. `w` may be a
    single 3-vector or an (N, 3) array of velocities.
    """
    if t1 < t0:
        raise DomainError(f"Propagation runs forward in time, got t0={t0} > t1={t1}")
    if isinstance(source, FlowPath):
        phi = source.propagator(t0, t1)
    else:
        phi = _canonical_propagator(source, t0, t1)
    result: npt.NDArray[np.float64] = np.asarray(w, dtype=np.float64) @ phi.T
    return result


class SimulationFrame(Protocol):
    """The clock, rate and drift a particle solver needs to integrate one rescaled equation.

    The solver advances the clock variable x; `t_of` maps it back to physical time. Velocities of the
    frame equal physical velocities times `velocity_scale(t)`.
    """

    @property
    def label(self) -> str: ...

    def clock_of(self, t: float) -> float: ...

    def t_of(self, x: float) -> float: ...

    def rate(self, x: float) -> float: ...

    def drift(self, x: float) -> Matrix3: ...

    def transport(self, x0: float, x1: float) -> Matrix3: ...

    def velocity_scale(self, t: float) -> float: ...


@dataclass(frozen=True, eq=False)
class RestFrame:
    """No deformation and unit collision rate: the spatially homogeneous Boltzmann equation."""

    @property
    def label(self) -> str:
        return "rest"

    def clock_of(self, t: float) -> float:
        return t

    def t_of(self, x: float) -> float:
        return x

    def rate(self, x: float) -> float:
        return 1.0

    def drift(self, x: float) -> Matrix3:
        return np.zeros((3, 3))

    def transport(self, x0: float, x1: float) -> Matrix3:
        return np.eye(3)

    def velocity_scale(self, t: float) -> float:
        return 1.0


@dataclass(frozen=True, eq=False)
class ScaledDecomposition:
    """L(t) = l(t) Q(tau), tau = integral of l, Q(tau) -> L0, with collision multiplier mu(tau).

    Linear scaling uses l(t) = t, so tau = t^2/2 and mu is singular at t = 0. Constant and Inverse
    scalings use l = 1 and l = 1/(t+1), keeping tau(0) = 0.
    """

    case: FlowCase
    l_tag: ScalingTag
    L0: Matrix3
    flow: FlowPath
    """The exact flow in the canonical basis."""

    @property
    def label(self) -> str:
        return "scaled"

    def l(self, t: float) -> float:
        if self.l_tag == "Constant":
            return 1.0
        if self.l_tag == "Inverse":
            return 1.0 / (t + 1.0)
        return t

    def tau_of_t(self, t: float) -> float:
        if self.l_tag == "Constant":
            return t
        if self.l_tag == "Inverse":
            return math.log1p(t)
        return t * t / 2.0

    def t_of_tau(self, tau: float) -> float:
        if self.l_tag == "Constant":
            return tau
        if self.l_tag == "Inverse":
            return math.expm1(tau)
        return math.sqrt(2.0 * tau)

    def mu(self, tau: float) -> float:
        t = self.t_of_tau(tau)
        if self.l_tag == "Linear" and t <= 0:
            raise DomainError("mu is singular at tau = 0 for the Linear scaling")
        return math.exp(-self.flow.trace_integral(t)) / self.l(t)

    def Q(self, tau: float) -> Matrix3:
        t = self.t_of_tau(tau)
        if self.l_tag == "Linear" and t <= 0:
            raise DomainError("Q is singular at tau = 0 for the Linear scaling")
        return self.flow.L(t) / self.l(t)

    # SimulationFrame
    def clock_of(self, t: float) -> float:
        return self.tau_of_t(t)

    def t_of(self, x: float) -> float:
        return self.t_of_tau(x)

    def rate(self, x: float) -> float:
        return self.mu(x)

    def drift(self, x: float) -> Matrix3:
        return self.Q(x)

    def transport(self, x0: float, x1: float) -> Matrix3:
        # dw/dtau = -Q w is dw/dt = -L w after the time change.
        return self.flow.propagator(self.t_of_tau(x0), self.t_of_tau(x1))

    def velocity_scale(self, t: float) -> float:
        return 1.0


def scaled_decomposition(case: FlowCase) -> ScaledDecomposition:
    c = case.constants
    l_tag: ScalingTag
    if case.tag == "HomogeneousDilatation":
        l_tag, L0 = "Inverse", np.eye(3)
    elif case.tag in ("CylindricalDilatation", "CylindricalDilatationShear", "PlanarShear"):
        l_tag, L0 = "Inverse", _projector_matrix(case.tag, c["K"])
    elif case.tag == "SimpleShear":
        l_tag, L0 = "Constant", canonical_matrix(case.tag, c)
    elif case.tag == "SimpleShearDecayingDilatation":
        l_tag, L0 = "Constant", _shear_parts(c)[0]
    elif case.tag == "CombinedOrthogonalShear":
        l_tag = "Linear"
        L0 = np.zeros((3, 3))
        L0[0, 2] = -c["K1"] * c["K3"]
    else:
        raise UnclassifiableFlow(f"No scaling known for {case.tag}")
    return ScaledDecomposition(case=case, l_tag=l_tag, L0=L0, flow=case.canonical_flow())


@dataclass(frozen=True, eq=False)
class DilatationFrame:
    """The homogeneous-dilatation equation in the variables xi = (1+t)w and s.

    With c = |2+gamma| the clock is s = (e^{c tau} - 1)/c (s = tau at gamma = -2). The remaining drift
    kappa(s) = (Q(tau) - I) dtau/ds decays and the collision multiplier mu(tau) e^{2 tau} tends to a
    constant.
    """

    decomposition: ScaledDecomposition
    gamma: float

    def __post_init__(self) -> None:
        if self.decomposition.case.tag != "HomogeneousDilatation":
            raise DomainError("The dilatation frame applies to HomogeneousDilatation only")
        if self.gamma > -2:
            raise DomainError(f"The dilatation frame needs gamma <= -2, got {self.gamma}")

    @property
    def label(self) -> str:
        return "dilatation"

    @property
    def c(self) -> float:
        return abs(2.0 + self.gamma)

    def tau_of_s(self, s: float) -> float:
        if self.c == 0:
            return s
        return math.log1p(self.c * s) / self.c

    def s_of_tau(self, tau: float) -> float:
        if self.c == 0:
            return tau
        return math.expm1(self.c * tau) / self.c

    def kappa(self, s: float) -> Matrix3:
        tau = self.tau_of_s(s)
        return (self.decomposition.Q(tau) - np.eye(3)) * math.exp(-self.c * tau)

    def kappa_exponent(self) -> float:
        """Decay exponent p of the bound |kappa(s)| <= C s^-p."""
        if self.c == 0:
            raise DomainError("No power-law bound on kappa at gamma = -2")
        return 1.0 + 1.0 / self.c

    # SimulationFrame
    def clock_of(self, t: float) -> float:
        return self.s_of_tau(self.decomposition.tau_of_t(t))

    def t_of(self, x: float) -> float:
        return self.decomposition.t_of_tau(self.tau_of_s(x))

    def rate(self, x: float) -> float:
        tau = self.tau_of_s(x)
        return self.decomposition.mu(tau) * math.exp(2.0 * tau)

    def drift(self, x: float) -> Matrix3:
        return self.kappa(x)

    def transport(self, x0: float, x1: float) -> Matrix3:
        t0, t1 = self.t_of(x0), self.t_of(x1)
        phi = self.decomposition.flow.propagator(t0, t1)
        result: Matrix3 = phi * ((1.0 + t1) / (1.0 + t0))
        return result

    def velocity_scale(self, t: float) -> float:
        return 1.0 + t


AnyFrame = Union[RestFrame, ScaledDecomposition, DilatationFrame]
