"""Long-time temperature laws of collision-dominated homoenergetic flows.

`predict` returns the law of beta(t) for a flow case and kernel homogeneity, `regime_table` the
coarse regime label of every (case, gamma), and `beta_ode` integrates the moment equation whose
solutions the power laws describe.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np
import numpy.typing as npt
import sympy
from scipy import integrate

from .exceptions import DomainError, MissingB, StiffnessFailure
from .flow import FlowCase, FlowCaseTag, Matrix3, as_matrix, scaled_decomposition

RegimeLabel = Literal["HilbertExpansion", "SelfSimilar", "FrozenCollisions", "NonMaxwellian"]

Regime = Literal["Case1Exponential", "Case2PowerLaw", "ShearDilatationPowerLaw", "OutOfScope"]

_CYLINDRICAL = ("CylindricalDilatation", "CylindricalDilatationShear")


@dataclass(frozen=True)
class GammaRange:
    """An interval of kernel homogeneities, open unless `closed` is set on a bound."""

    lower: float | None = None
    upper: float | None = None
    closed: bool = False

    def contains(self, gamma: float) -> bool:
        if self.lower is not None and not (
            gamma >= self.lower if self.closed else gamma > self.lower
        ):
            return False
        if self.upper is not None and not (
            gamma <= self.upper if self.closed else gamma < self.upper
        ):
            return False
        return True

    def __str__(self) -> str:
        parts = []
        if self.lower is not None:
            parts.append(f"gamma {'>=' if self.closed else '>'} {sympy.nsimplify(self.lower)}")
        if self.upper is not None:
            parts.append(f"gamma {'<=' if self.closed else '<'} {sympy.nsimplify(self.upper)}")
        return " and ".join(parts) or "all gamma"


@dataclass(frozen=True)
class Prediction:
    """The predicted law of beta(t) for one flow case and homogeneity.

    Power laws read beta ~ C t^p with p = `beta_exponent`. Case1Exponential laws read
    beta ~ C e^{a tau} with a = `beta_exponent`; since tau = log(1+t) for those cases this is also
    the exponent in t, and fits should be made in tau (`coordinate == "tau"`).
    """

    case: FlowCase
    gamma: float
    regime: Regime
    label: RegimeLabel
    beta_exponent: float | None
    exponent_expr: str | None
    """The exponent as an exact rational expression of gamma."""

    validity: GammaRange
    prefactor: float | None = None
    b: float | None = None
    coordinate: Literal["t", "tau"] = "t"
    asymptotic_only: bool = True
    """The o(1) corrections of the law are dropped; only the exponent and leading prefactor hold."""

    note: str | None = None

    @property
    def is_power_law(self) -> bool:
        return self.regime != "OutOfScope"

    def to_json(self) -> dict[str, Any]:
        return {
            "case": self.case.to_json(),
            "gamma": self.gamma,
            "regime": self.regime,
            "label": self.label,
            "exponent": self.beta_exponent,
            "exponent_expr": self.exponent_expr,
            "prefactor": self.prefactor,
            "b": self.b,
            "validity": str(self.validity),
            "coordinate": self.coordinate,
            "asymptotic_only": self.asymptotic_only,
            "note": self.note,
        }


def regime_table(case: FlowCase | FlowCaseTag, gamma: float) -> RegimeLabel:
    """The long-time regime of a flow case at homogeneity gamma.

    Combinations outside the collision-dominated and balanced regimes are hyperbolic-dominated and
    labelled NonMaxwellian.
    """
    tag = case.tag if isinstance(case, FlowCase) else case
    if tag in ("SimpleShear", "SimpleShearDecayingDilatation"):
        if gamma == 0:
            return "SelfSimilar"
        return "HilbertExpansion" if gamma > 0 else "NonMaxwellian"
    if tag == "PlanarShear":
        if gamma == 0:
            return "SelfSimilar"
        return "HilbertExpansion" if gamma < 0 else "NonMaxwellian"
    if tag in _CYLINDRICAL:
        return "HilbertExpansion" if gamma < -1.5 else "FrozenCollisions"
    if tag == "HomogeneousDilatation":
        return "HilbertExpansion" if gamma <= -2 else "NonMaxwellian"
    if tag == "CombinedOrthogonalShear":
        return "HilbertExpansion" if gamma > 0 else "NonMaxwellian"
    raise DomainError(f"Unknown flow case {tag!r}")


def case1_rate(L0: Matrix3 | Sequence[float]) -> float:
    """The exponential rate a = (2/3) Tr(L0) of beta ~ C e^{a tau}.

    Raises:
        DomainError: If L0 is traceless, where the case-2 law applies instead.
    """
    trace = float(np.trace(as_matrix(L0)))
    if abs(trace) <= 1e-12:
        raise DomainError("L0 is traceless; the exponential law needs Tr(L0) != 0")
    return 2.0 * trace / 3.0


def _validity(tag: FlowCaseTag) -> GammaRange:
    if tag == "PlanarShear":
        return GammaRange(upper=0.0)
    if tag in _CYLINDRICAL:
        return GammaRange(upper=-1.5)
    if tag == "HomogeneousDilatation":
        return GammaRange(upper=-2.0, closed=True)
    return GammaRange(lower=0.0)


def _exact(gamma: float) -> sympy.Expr:
    return sympy.nsimplify(gamma, rational=True)


def predict(
    case: FlowCase, gamma: float, b: float | None = None, *, prefactor: bool = False
) -> Prediction:
    """The predicted long-time law of beta(t).

    Args:
        case: The classified flow.
        gamma: Homogeneity of the collision kernel.
        b: The Green-Kubo constant of the case, needed for prefactors of the power laws.
        prefactor: Require the leading prefactor C.

    Raises:
        MissingB: If `prefactor` is set without `b`.
    """
    if prefactor and b is None:
        raise MissingB(f"The prefactor of the {case.tag} law needs the Green-Kubo constant b")
    label = regime_table(case, gamma)
    validity = _validity(case.tag)
    if label != "HilbertExpansion":
        return Prediction(
            case=case,
            gamma=gamma,
            regime="OutOfScope",
            label=label,
            beta_exponent=None,
            exponent_expr=None,
            validity=validity,
            b=b,
        )

    g = _exact(gamma)
    if case.tag in ("HomogeneousDilatation", "PlanarShear", *_CYLINDRICAL):
        a = case1_rate(scaled_decomposition(case).L0)
        exponent = sympy.nsimplify(a, rational=True)
        note = None
        if case.tag == "HomogeneousDilatation" and gamma == -2:
            note = "critical homogeneity: the collision clock is s = tau"
        return Prediction(
            case=case,
            gamma=gamma,
            regime="Case1Exponential",
            label=label,
            beta_exponent=float(exponent),
            exponent_expr=str(exponent),
            validity=validity,
            b=b,
            coordinate="tau",
            note=note,
        )

    C: float | None = None
    if case.tag == "SimpleShear":
        regime: Regime = "Case2PowerLaw"
        exponent = -2 / g
        if b is not None:
            C = ((4.0 / 3.0) * gamma * b) ** (-2.0 / gamma)
    elif case.tag == "CombinedOrthogonalShear":
        regime = "Case2PowerLaw"
        exponent = -6 / g
        if b is not None:
            C = 2.0 ** (3.0 / gamma) * ((4.0 / 3.0) * gamma * b) ** (-2.0 / gamma)
    else:
        regime = "ShearDilatationPowerLaw"
        exponent = -4 / g
        if b is not None:
            C = (4.0 * gamma * b / (gamma + 6.0)) ** (-2.0 / gamma)
    return Prediction(
        case=case,
        gamma=gamma,
        regime=regime,
        label=label,
        beta_exponent=float(exponent),
        exponent_expr=str(exponent),
        validity=validity,
        prefactor=C,
        b=b,
    )


def _mu_asymptotic(tag: FlowCaseTag, t: sympy.Symbol) -> sympy.Expr:
    if tag == "HomogeneousDilatation":
        return t**-2
    if tag in ("SimpleShear", "PlanarShear"):
        return sympy.Integer(1)
    return 1 / t


@dataclass(frozen=True)
class CollisionDominance:
    limit: str
    """The limit of mu(t) beta^(-gamma/2) as t -> oo, as a sympy string."""

    dominated: bool


def collision_dominance(
    case: FlowCase, gamma: float, exponent: float | None = None
) -> CollisionDominance:
    """Whether collisions outrun the drift along beta ~ t^p, i.e. mu(t) beta^(-gamma/2) -> oo.

    `exponent` defaults to the exponent of `predict(case, gamma)`.
    """
    if exponent is None:
        prediction = predict(case, gamma)
        if prediction.beta_exponent is None:
            raise DomainError(f"No predicted law for {case.tag} at gamma={gamma}")
        exponent = prediction.beta_exponent
    t = sympy.Symbol("t", positive=True)
    p = sympy.nsimplify(exponent, rational=True)
    expression = _mu_asymptotic(case.tag, t) * (t**p) ** (-_exact(gamma) / 2)
    limit = sympy.limit(sympy.simplify(expression), t, sympy.oo)
    return CollisionDominance(limit=str(limit), dominated=bool(limit == sympy.oo))


@dataclass(frozen=True)
class BetaTrajectory:
    t: npt.NDArray[np.float64]
    beta: npt.NDArray[np.float64]
    """Numerical solution of the moment equation."""

    closed_form: npt.NDArray[np.float64] | None
    """The separable solution (beta0^(-gamma/2) + (4/3) gamma b lambda(t))^(-2/gamma), or the
    leading law ((4 gamma b/(gamma+6)) t^2)^(-2/gamma) of the decaying-dilatation equation."""

    lam: npt.NDArray[np.float64]
    """lambda(t) = integral of 1/mu from the first grid point."""


def _lambda(
    mu: Callable[[float], float], grid: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    pieces = [
        integrate.quad(lambda s: 1.0 / mu(s), a, b, epsabs=0.0, epsrel=1e-12, limit=200)[0]
        for a, b in zip(grid[:-1], grid[1:])
    ]
    return np.concatenate([[0.0], np.cumsum(pieces)])


def beta_ode(
    case: FlowCase | FlowCaseTag,
    gamma: float,
    b: float,
    mu: Callable[[float], float],
    beta0: float,
    t_grid: Sequence[float] | npt.NDArray[np.float64],
) -> BetaTrajectory:
    """Integrate the moment equation beta_t = -(8/3) b beta^(gamma/2+1) / mu(t).

    For SimpleShearDecayingDilatation the equation carries the dilatation term 2 beta / (3t). The
    integration uses an embedded adaptive Runge-Kutta pair.

    Raises:
        StiffnessFailure: If the step control fails.
    """
    tag = case.tag if isinstance(case, FlowCase) else case
    grid = np.asarray(t_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise DomainError("t_grid must be a strictly increasing sequence of at least two times")
    if b < 0 or beta0 <= 0:
        raise DomainError(f"Need b >= 0 and beta0 > 0, got b={b}, beta0={beta0}")
    if any(mu(float(t)) <= 0 for t in grid):
        raise DomainError("mu must be positive on the grid")
    dilatation = tag == "SimpleShearDecayingDilatation"
    if dilatation and grid[0] <= 0:
        raise DomainError("The decaying-dilatation equation is singular at t = 0")

    def rhs(t: float, y: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        beta = max(float(y[0]), 0.0)
        rate = -(8.0 / 3.0) * b * beta ** (gamma / 2.0 + 1.0) / mu(t)
        if dilatation:
            rate += 2.0 * beta / (3.0 * t)
        return np.array([rate])

    solution = integrate.solve_ivp(
        rhs,
        (float(grid[0]), float(grid[-1])),
        [beta0],
        method="RK45",
        t_eval=grid,
        rtol=1e-11,
        atol=1e-14 * beta0,
    )
    if solution.status != 0:
        raise StiffnessFailure(f"beta ODE integration failed: {solution.message}")

    lam = _lambda(mu, grid)
    closed: npt.NDArray[np.float64] | None = None
    if b > 0 and gamma > 0:
        if dilatation:
            closed = (4.0 * gamma * b / (gamma + 6.0) * grid**2) ** (-2.0 / gamma)
        else:
            closed = (beta0 ** (-gamma / 2.0) + (4.0 / 3.0) * gamma * b * lam) ** (-2.0 / gamma)
    return BetaTrajectory(t=grid, beta=solution.y[0], closed_form=closed, lam=lam)


def late_time_law(gamma: float, b: float, lam: float) -> float:
    """The leading case-2 law ((4/3) gamma b lambda)^(-2/gamma)."""
    if gamma <= 0 or b <= 0 or lam <= 0:
        raise DomainError("The case-2 law needs gamma > 0, b > 0 and lambda > 0")
    return math.pow((4.0 / 3.0) * gamma * b * lam, -2.0 / gamma)
