"""Transport and no-time-counter collision substeps of the particle solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..exceptions import MajorantViolation
from ..flow import AnyFrame
from ..kernel import (
    KernelSpec,
    acceptance_rate,
    collide_pairs,
    omega_from_uniforms,
    rate_majorant,
    total_rate,
)
from .ensemble import ParticleEnsemble

_INITIAL_SOFT_RATIO = 4.0
_RATIO_GROWTH = 1.5


def step_transport(e: ParticleEnsemble, frame: AnyFrame, dtau: float) -> ParticleEnsemble:
    """Map every velocity through the exact propagator of the frame drift over [tau, tau+dtau]."""
    if dtau > 0:
        phi = frame.transport(e.tau, e.tau + dtau)
        e.velocities = e.velocities @ phi.T
    return e


def majorant(e: ParticleEnsemble, kernel: KernelSpec) -> tuple[float, float]:
    """The pair-rate majorant for the current ensemble and the absolute speed floor it used.

    Hard kernels bound relative speeds by twice the largest speed. Soft kernels use the adaptive
    ratio stored on the ensemble; only the truncated kernel is capped by the rate at the floor.
    """
    thermal = e.thermal_speed()
    if kernel.gamma >= 0:
        max_speed = float(np.sqrt(np.max(np.einsum("ij,ij->i", e.velocities, e.velocities))))
        return rate_majorant(kernel, max(2.0 * max_speed, 1e-300)), 0.0
    floor = kernel.speed_floor * thermal
    if e.majorant_ratio is None:
        e.majorant_ratio = _INITIAL_SOFT_RATIO
    scaled = e.majorant_ratio * float(total_rate(kernel, thermal, floor))
    if kernel.truncated:
        return min(rate_majorant(kernel, thermal, speed_floor=floor), scaled), floor
    return scaled, floor


def raise_majorant(e: ParticleEnsemble, kernel: KernelSpec, violation: MajorantViolation) -> None:
    """Grow the soft-kernel ratio past the offending rate before a retry."""
    thermal = e.thermal_speed()
    thermal_rate = float(total_rate(kernel, thermal, kernel.speed_floor * thermal))
    current = e.majorant_ratio or _INITIAL_SOFT_RATIO
    e.majorant_ratio = max(current * _RATIO_GROWTH, _RATIO_GROWTH * violation.rate / thermal_rate)


@dataclass
class CandidateDraws:
    """Candidate pairs and their uniforms for one collision step.

    A retry after a `MajorantViolation` passes the same instance back in: the pairs drawn so far are
    kept in order and only the extra candidates the larger majorant asks for are drawn.
    """

    first: npt.NDArray[np.int64] = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    second: npt.NDArray[np.int64] = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    uniforms: npt.NDArray[np.float64] = field(default_factory=lambda: np.empty((3, 0)))

    def __len__(self) -> int:
        return int(self.first.size)

    def extend_to(self, n_pairs: int, N: int, rng: np.random.Generator) -> None:
        extra = n_pairs - len(self)
        if extra <= 0:
            return
        i = rng.integers(N, size=extra)
        j = rng.integers(N - 1, size=extra)
        j = j + (j >= i)
        self.first = np.concatenate([self.first, i])
        self.second = np.concatenate([self.second, j])
        self.uniforms = np.concatenate([self.uniforms, rng.random((3, extra))], axis=1)


def step_collisions(
    e: ParticleEnsemble,
    kernel: KernelSpec,
    mu_now: float,
    dtau: float,
    pair_majorant: float,
    speed_floor: float = 0.0,
    draws: CandidateDraws | None = None,
) -> ParticleEnsemble:
    """Collide candidate pairs drawn uniformly, each accepted with probability rate/majorant.

    Candidates are processed in rounds of pairwise-disjoint pairs, which reproduces processing them
    one by one in draw order. On a `MajorantViolation` the ensemble is left as it was before the
    step, and `draws` holds the candidates to reuse on the retry.
    """
    if mu_now <= 0 or dtau <= 0:
        return e
    N = e.N
    expected = 0.5 * (N - 1) * mu_now * pair_majorant * dtau + e.candidate_remainder
    n_pairs = int(math.floor(expected))
    remainder = expected - n_pairs
    if n_pairs == 0:
        e.candidate_remainder = remainder
        return e

    if draws is None:
        draws = CandidateDraws()
    draws.extend_to(n_pairs, N, e.rng)
    i, j = draws.first[:n_pairs], draws.second[:n_pairs]
    uniforms = draws.uniforms[:, :n_pairs]
    velocities = e.velocities.copy()
    accepted_total = 0
    remaining = np.arange(n_pairs)
    while remaining.size:
        ii, jj = i[remaining], j[remaining]
        local = np.arange(remaining.size)
        first = np.full(N, remaining.size)
        np.minimum.at(first, ii, local)
        np.minimum.at(first, jj, local)
        ready = (first[ii] == local) & (first[jj] == local)

        k = remaining[ready]
        a, b = i[k], j[k]
        V = velocities[b] - velocities[a]
        speeds = np.sqrt(np.einsum("ij,ij->i", V, V))
        rates = acceptance_rate(kernel, speeds, speed_floor)
        worst = int(np.argmax(rates))
        if rates[worst] > pair_majorant * (1.0 + 1e-12):
            raise MajorantViolation(
                f"Pair rate {rates[worst]:.6g} exceeds majorant {pair_majorant:.6g}",
                rate=float(rates[worst]),
                majorant=pair_majorant,
            )
        accept = (uniforms[0, k] * pair_majorant < rates) & (speeds > 0)
        if np.any(accept):
            a, b, k = a[accept], b[accept], k[accept]
            omega = omega_from_uniforms(kernel, V[accept], uniforms[1, k], uniforms[2, k])
            velocities[a], velocities[b] = collide_pairs(velocities[a], velocities[b], omega)
            accepted_total += int(accept.sum())
        remaining = remaining[~ready]

    e.velocities = velocities
    e.candidate_remainder = remainder
    e.candidates += n_pairs
    e.collisions += accepted_total
    return e
