from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from homokinetics import DomainError, KernelSpec, collide, evaluate_kernel, inverse_power_gamma
from homokinetics.kernel import (
    acceptance_rate,
    rate_majorant,
    sample_omega,
    sample_omega_batch,
    total_rate,
)


def test_hard_sphere_kernel():
    spec = KernelSpec(gamma=1, angular="cosine", strength=2 * math.pi)
    # 2 pi * |V| * |c| / (2 pi) = |omega . V|
    assert evaluate_kernel(spec, 0.5, 3.0) == pytest.approx(1.5)


def test_zero_speed_hard_kernel_vanishes():
    assert evaluate_kernel(KernelSpec(gamma=1), 0.2, 0.0) == 0.0


def test_doubling_speed_doubles_linear_kernel():
    spec = KernelSpec(gamma=1)
    assert evaluate_kernel(spec, 0.3, 2.0) == pytest.approx(2 * evaluate_kernel(spec, 0.3, 1.0))


def test_soft_kernel_at_zero_speed_is_an_error():
    with pytest.raises(DomainError):
        evaluate_kernel(KernelSpec(gamma=-1), 0.2, 0.0)


def test_kernel_rejects_bad_arguments():
    spec = KernelSpec(gamma=0)
    with pytest.raises(DomainError):
        evaluate_kernel(spec, 1.5, 1.0)
    with pytest.raises(DomainError):
        evaluate_kernel(spec, 0.0, -1.0)


def test_gamma_range_is_validated():
    with pytest.raises(ValidationError):
        KernelSpec(gamma=3.0)
    with pytest.raises(ValidationError):
        KernelSpec(gamma=0.0, strength=0.0)


def test_inverse_power_homogeneity():
    assert inverse_power_gamma(5.0) == pytest.approx(0.0)
    assert inverse_power_gamma(3.0) == pytest.approx(-1.0)
    with pytest.raises(DomainError):
        inverse_power_gamma(1.0)


def test_grazing_collision_is_identity():
    out = collide([1.0, 0.0, 0.0], [1.0, 2.0, 0.0], [1.0, 0.0, 0.0])
    np.testing.assert_allclose(out.v_prime, [1.0, 0.0, 0.0])
    np.testing.assert_allclose(out.vstar_prime, [1.0, 2.0, 0.0])


def test_head_on_collision_exchanges():
    out = collide([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0])
    np.testing.assert_allclose(out.v_prime, [1.0, 0.0, 0.0])
    np.testing.assert_allclose(out.vstar_prime, [0.0, 0.0, 0.0])


def test_collision_conserves_momentum_and_energy():
    rng = np.random.default_rng(11)
    for _ in range(100):
        v, vstar = rng.normal(size=3), rng.normal(size=3)
        omega = rng.normal(size=3)
        omega /= np.linalg.norm(omega)
        out = collide(v, vstar, omega)
        np.testing.assert_allclose(out.v_prime + out.vstar_prime, v + vstar, rtol=1e-14, atol=1e-14)
        before = v @ v + vstar @ vstar
        after = out.v_prime @ out.v_prime + out.vstar_prime @ out.vstar_prime
        assert after == pytest.approx(before, rel=1e-13)


def test_collide_needs_unit_omega():
    with pytest.raises(DomainError):
        collide([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0])


def test_constant_density_samples_are_uniform():
    rng = np.random.default_rng(0)
    V = np.tile([0.0, 0.0, 2.0], (100_000, 1))
    omega = sample_omega_batch(KernelSpec(gamma=0), V, rng)
    np.testing.assert_allclose(np.linalg.norm(omega, axis=1), 1.0, atol=1e-12)
    counts, _ = np.histogram(omega[:, 2], bins=20, range=(-1.0, 1.0))
    assert stats.chisquare(counts).pvalue > 1e-3


def test_cosine_density_samples_follow_abs_law():
    rng = np.random.default_rng(1)
    V = np.tile([1.0, 1.0, 0.0], (100_000, 1))
    omega = sample_omega_batch(KernelSpec(gamma=1, angular="cosine"), V, rng)
    c = np.abs(omega @ (np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0)))
    # |c| has CDF c^2 on [0, 1]
    assert stats.kstest(c, lambda x: np.clip(x, 0.0, 1.0) ** 2).pvalue > 1e-3


def test_sampling_is_deterministic():
    spec = KernelSpec(gamma=0)
    first = sample_omega(spec, [1.0, 0.0, 0.0], np.random.default_rng(5))
    second = sample_omega(spec, [1.0, 0.0, 0.0], np.random.default_rng(5))
    np.testing.assert_array_equal(first, second)


def test_sampling_needs_nonzero_velocity():
    with pytest.raises(DomainError):
        sample_omega(KernelSpec(gamma=0), [0.0, 0.0, 0.0], np.random.default_rng(0))


def test_majorant_for_hard_kernel_is_linear():
    spec = KernelSpec(gamma=1, strength=3.0)
    assert rate_majorant(spec, 2.0) == pytest.approx(6.0)


def test_majorant_for_maxwell_molecules_is_flat():
    spec = KernelSpec(gamma=0, strength=2.0)
    assert rate_majorant(spec, 0.1) == rate_majorant(spec, 100.0) == pytest.approx(2.0)


def test_majorant_for_soft_kernel_uses_floor():
    spec = KernelSpec(gamma=-1)
    assert rate_majorant(spec, 5.0, speed_floor=0.01) == pytest.approx(100.0)
    with pytest.raises(DomainError):
        rate_majorant(spec, 5.0)


def test_total_rate_bounded_by_majorant():
    spec = KernelSpec(gamma=-2)
    speeds = np.array([0.0, 0.001, 0.5, 3.0])
    rates = total_rate(spec, speeds, floor=0.01)
    assert np.all(rates <= rate_majorant(spec, 3.0, speed_floor=0.01) + 1e-12)
    with pytest.raises(DomainError):
        total_rate(spec, speeds)


def test_acceptance_rate_of_soft_kernel_ignores_floor():
    spec = KernelSpec(gamma=-1)
    assert not spec.truncated
    # a pair well below the floor keeps its exact rate 1 / 0.05
    assert acceptance_rate(spec, [0.05], floor=0.2)[0] == pytest.approx(20.0)
    assert total_rate(spec, [0.05], floor=0.2)[0] == pytest.approx(5.0)
    np.testing.assert_array_equal(acceptance_rate(spec, [0.0, 4.0], floor=0.2), [0.0, 0.25])


def test_acceptance_rate_truncates_only_at_gamma_minus_three():
    spec = KernelSpec(gamma=-3, strength=2.0)
    assert spec.truncated
    assert acceptance_rate(spec, [0.05, 1.0], floor=0.5).tolist() == pytest.approx([16.0, 2.0])
    assert acceptance_rate(KernelSpec(gamma=1), [3.0])[0] == pytest.approx(3.0)
