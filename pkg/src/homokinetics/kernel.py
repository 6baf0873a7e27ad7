from __future__ import annotations

import math
from dataclasses import dataclass as std_dataclass
from typing import Annotated, Literal

import numpy as np
import numpy.typing as npt
from pydantic import Field
from pydantic.dataclasses import dataclass

from .exceptions import DomainError

AngularDensity = Literal["constant", "cosine"]
"""Built-in angular densities of the scattering direction, both normalized to unit integral over
the sphere: `constant` is 1/(4 pi), `cosine` is |n.omega|/(2 pi)."""

Vectors = npt.NDArray[np.float64]

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """A collision kernel B(n.omega, |V|) = strength * |V|^gamma * a(n.omega).

    The hard-sphere kernel |omega.(v - v*)| is `KernelSpec(gamma=1, angular="cosine",
    strength=2*pi)`.
    """

    gamma: Annotated[float, Field(ge=-3.0, le=2.0)]
    """Homogeneity in the relative speed. 0 is Maxwell molecules, 1 hard spheres, < 0 soft."""

    angular: AngularDensity = "constant"
    """The angular density a."""

    strength: Annotated[float, Field(gt=0.0)] = 1.0
    """Prefactor; sets the collision time unit."""

    speed_floor: Annotated[float, Field(gt=0.0, lt=1.0)] = 1e-6
    """For gamma < 0, a fraction of the thermal speed. It caps the rejection majorant; only a
    truncated kernel (gamma = -3) also clamps the rate used for acceptance."""

    def angular_value(self, c: npt.ArrayLike) -> npt.NDArray[np.float64]:
        c = np.asarray(c, dtype=np.float64)
        if self.angular == "constant":
            return np.full_like(c, 1.0 / (4.0 * math.pi))
        result: npt.NDArray[np.float64] = np.abs(c) / (2.0 * math.pi)
        return result

    @property
    def truncated(self) -> bool:
        """Whether relative speeds below the floor are cut off in the collision rate itself.

        At gamma = -3 the rate averaged over a Gaussian diverges logarithmically at zero relative
        speed, so the kernel is replaced by strength * max(|V|, floor)^-3 * a.
        """
        return self.gamma <= -3.0

    @property
    def angular_integral(self) -> float:
        """Integral of the angular density over the unit sphere."""
        return 1.0


def inverse_power_gamma(nu: float) -> float:
    """Kernel homogeneity of the inverse-power potential |x|^(1-nu)."""
    if nu <= 1:
        raise DomainError(f"Inverse-power exponent must exceed 1, got {nu}")
    return (nu - 5.0) / (nu - 1.0)


def evaluate_kernel(spec: KernelSpec, n_dot_omega: float, speed: float) -> float:
    if abs(n_dot_omega) > 1.0:
        raise DomainError(f"n.omega must lie in [-1, 1], got {n_dot_omega}")
    if speed < 0:
        raise DomainError(f"Speed must be nonnegative, got {speed}")
    if speed == 0 and spec.gamma < 0:
        raise DomainError("Soft kernels are unbounded at zero relative speed")
    return float(spec.strength * speed**spec.gamma * spec.angular_value(n_dot_omega))


def total_rate(
    spec: KernelSpec, speeds: npt.ArrayLike, floor: float = 0.0
) -> npt.NDArray[np.float64]:
    """Integral of B over the sphere for each relative speed; soft kernels clamp speeds at `floor`."""
    s = np.asarray(speeds, dtype=np.float64)
    if spec.gamma < 0:
        if floor <= 0:
            raise DomainError("Soft kernels need a positive speed floor")
        s = np.maximum(s, floor)
    result: npt.NDArray[np.float64] = spec.strength * spec.angular_integral * s**spec.gamma
    return result


def acceptance_rate(
    spec: KernelSpec, speeds: npt.ArrayLike, floor: float = 0.0
) -> npt.NDArray[np.float64]:
    """Total rate a candidate pair is accepted against.

    Exact for every kernel but a truncated one, which clamps speeds at `floor`. A zero relative
    speed gets rate 0 for soft kernels, since such a collision leaves the pair unchanged.
    """
    s = np.asarray(speeds, dtype=np.float64)
    if spec.gamma >= 0:
        return total_rate(spec, s)
    if spec.truncated:
        return total_rate(spec, s, floor)
    moving = s > 0
    rates = np.zeros_like(s)
    rates[moving] = spec.strength * spec.angular_integral * s[moving] ** spec.gamma
    return rates


def rate_majorant(spec: KernelSpec, max_rel_speed: float, speed_floor: float | None = None) -> float:
    """Upper bound of the total rate over all admissible relative speeds.

    For gamma >= 0 the admissible speeds are those up to `max_rel_speed`; for gamma < 0 those above
    the absolute `speed_floor`.
    """
    if max_rel_speed <= 0:
        raise DomainError(f"max_rel_speed must be positive, got {max_rel_speed}")
    if spec.gamma >= 0:
        return float(spec.strength * spec.angular_integral * max_rel_speed**spec.gamma)
    if speed_floor is None or speed_floor <= 0:
        raise DomainError("Soft kernels need a positive speed floor for the majorant")
    return float(spec.strength * spec.angular_integral * speed_floor**spec.gamma)


@std_dataclass(frozen=True)
class CollisionOutcome:
    v_prime: npt.NDArray[np.float64]
    vstar_prime: npt.NDArray[np.float64]


def collide_pairs(v: Vectors, vstar: Vectors, omega: Vectors) -> tuple[Vectors, Vectors]:
    """Apply the collision rule row by row: v' = v + ((v*-v).omega)omega, v*' = v* - (...)omega."""
    exchange = np.einsum("ij,ij->i", vstar - v, omega)[:, None] * omega
    return v + exchange, vstar - exchange


def collide(v: npt.ArrayLike, vstar: npt.ArrayLike, omega: npt.ArrayLike) -> CollisionOutcome:
    omega_arr = np.asarray(omega, dtype=np.float64)
    if abs(float(np.linalg.norm(omega_arr)) - 1.0) > _UNIT_TOL:
        raise DomainError(f"omega must be a unit vector, got norm {np.linalg.norm(omega_arr)}")
    v_new, vstar_new = collide_pairs(
        np.asarray(v, dtype=np.float64)[None, :],
        np.asarray(vstar, dtype=np.float64)[None, :],
        omega_arr[None, :],
    )
    return CollisionOutcome(v_prime=v_new[0], vstar_prime=vstar_new[0])


def _frames(n: Vectors) -> tuple[Vectors, Vectors]:
    helper = np.zeros_like(n)
    use_y = np.abs(n[:, 0]) > 0.9
    helper[~use_y, 0] = 1.0
    helper[use_y, 1] = 1.0
    a = np.cross(n, helper)
    a /= np.linalg.norm(a, axis=1)[:, None]
    return a, np.cross(n, a)


def omega_from_uniforms(
    spec: KernelSpec, V: Vectors, u_polar: npt.ArrayLike, u_azimuth: npt.ArrayLike
) -> Vectors:
    """Map uniforms in [0, 1) to scattering directions distributed by the angular density about V."""
    speeds = np.linalg.norm(V, axis=1)
    if np.any(speeds == 0):
        raise DomainError("Scattering direction is undefined for zero relative velocity")
    n = V / speeds[:, None]
    x = 2.0 * np.asarray(u_polar, dtype=np.float64) - 1.0
    if spec.angular == "constant":
        c = x
    else:
        # |c| has density 2|c| on [0, 1]
        c = np.sign(x) * np.sqrt(np.abs(x))
    phi = 2.0 * math.pi * np.asarray(u_azimuth, dtype=np.float64)
    a, b = _frames(n)
    sin_theta = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
    omega: Vectors = (
        c[:, None] * n
        + (sin_theta * np.cos(phi))[:, None] * a
        + (sin_theta * np.sin(phi))[:, None] * b
    )
    return omega


def sample_omega_batch(spec: KernelSpec, V: Vectors, rng: np.random.Generator) -> Vectors:
    u = rng.random((2, V.shape[0]))
    return omega_from_uniforms(spec, V, u[0], u[1])


def sample_omega(spec: KernelSpec, V: npt.ArrayLike, rng: np.random.Generator) -> Vectors:
    """Draw one scattering direction for relative velocity V."""
    return sample_omega_batch(spec, np.asarray(V, dtype=np.float64)[None, :], rng)[0]
