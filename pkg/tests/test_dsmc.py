from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from homokinetics import (
    ConfigError,
    KernelSpec,
    MajorantViolation,
    Maxwellian,
    Runner,
    SimConfig,
    SimulationHooks,
    TwoTemperature,
    canonical_case,
    init_ensemble,
    scaled_decomposition,
    step_collisions,
    step_transport,
    summarize,
)
from homokinetics.dsmc import (
    CandidateDraws,
    build_frame,
    read_series_csv,
    series_to_csv,
    write_series_csv,
)
from homokinetics.dsmc.ensemble import ParticleEnsemble, replica_rng
from homokinetics.flow import RestFrame

from .testing_processor import fetch_normalized_spans


def rest_config(**overrides) -> SimConfig:
    settings = dict(
        kernel=KernelSpec(gamma=0),
        duration=2.0,
        N=2000,
        clock_ticks=20,
        output_stride=2,
        name="rest",
    )
    settings.update(overrides)
    return SimConfig(**settings)


def test_maxwellian_initial_moments_are_exact():
    config = rest_config(N=10_000)
    e = init_ensemble(config)
    np.testing.assert_allclose(e.momentum(), 0.0, atol=1e-9)
    assert summarize(e, RestFrame()).beta == pytest.approx(1.0, rel=1e-12)


def test_initial_beta_matches_requested_value():
    config = rest_config(initial=Maxwellian(beta=2.5))
    assert summarize(init_ensemble(config), RestFrame()).beta == pytest.approx(2.5, rel=1e-12)


def test_two_temperature_is_matched_to_its_mixture_beta():
    initial = TwoTemperature(beta_a=1.0, beta_b=4.0, fraction=0.5)
    e = init_ensemble(rest_config(initial=initial))
    summary = summarize(e, RestFrame())
    assert summary.beta == pytest.approx(initial.target_beta, rel=1e-12)
    assert summary.fourth_cumulant > 0.2


def test_same_seed_gives_identical_ensembles():
    first = init_ensemble(rest_config(seed=9), replica=1)
    second = init_ensemble(rest_config(seed=9), replica=1)
    np.testing.assert_array_equal(first.velocities, second.velocities)
    other = init_ensemble(rest_config(seed=9), replica=2)
    assert not np.array_equal(first.velocities, other.velocities)


def test_shear_transport_is_exact():
    frame = scaled_decomposition(canonical_case("SimpleShear", K=2.0))
    velocities = np.random.default_rng(0).normal(size=(50, 3))
    e = ParticleEnsemble(velocities=velocities.copy(), rng=replica_rng(0, 0), tau=1.0)
    step_transport(e, frame, 0.25)
    expected = velocities.copy()
    expected[:, 0] -= 2.0 * 0.25 * velocities[:, 1]
    np.testing.assert_allclose(e.velocities, expected, atol=1e-12)


def test_rest_transport_is_identity():
    velocities = np.random.default_rng(0).normal(size=(10, 3))
    e = ParticleEnsemble(velocities=velocities.copy(), rng=replica_rng(0, 0), tau=0.0)
    step_transport(e, RestFrame(), 1.0)
    np.testing.assert_array_equal(e.velocities, velocities)


def test_no_collisions_without_rate():
    velocities = np.random.default_rng(0).normal(size=(100, 3))
    e = ParticleEnsemble(velocities=velocities.copy(), rng=replica_rng(0, 0), tau=0.0)
    step_collisions(e, KernelSpec(gamma=0), 0.0, 1.0, 1.0)
    np.testing.assert_array_equal(e.velocities, velocities)
    assert e.collisions == 0


def test_head_on_pair_exchanges_velocities(mocker):
    mocker.patch(
        "homokinetics.dsmc.steps.omega_from_uniforms",
        side_effect=lambda spec, V, u1, u2: V / np.linalg.norm(V, axis=1)[:, None],
    )
    velocities = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    e = ParticleEnsemble(velocities=velocities.copy(), rng=replica_rng(0, 0), tau=0.0)
    # one candidate: 0.5 * (N-1) * mu * majorant * dtau = 1
    step_collisions(e, KernelSpec(gamma=0), 1.0, 2.0, 1.0)
    assert e.candidates == 1
    assert e.collisions == 1
    np.testing.assert_allclose(e.velocities, velocities[::-1])


def test_majorant_violation_leaves_ensemble_unchanged():
    velocities = np.random.default_rng(0).normal(size=(200, 3))
    e = ParticleEnsemble(velocities=velocities.copy(), rng=replica_rng(0, 0), tau=0.0)
    with pytest.raises(MajorantViolation) as exc:
        step_collisions(e, KernelSpec(gamma=1), 1.0, 1.0, 1e-3)
    assert exc.value.majorant == 1e-3
    np.testing.assert_array_equal(e.velocities, velocities)


def test_collisions_conserve_momentum_and_energy():
    e = init_ensemble(rest_config())
    energy, momentum = e.energy(), e.momentum()
    step_collisions(e, KernelSpec(gamma=1), 1.0, 0.5, 2.0 * 8.0)
    assert e.collisions > 0
    assert e.energy() == pytest.approx(energy, rel=1e-12)
    np.testing.assert_allclose(e.momentum(), momentum, atol=1e-9)


def test_maxwell_collision_frequency_is_temperature_independent():
    kernel = KernelSpec(gamma=0, strength=2.0)
    counts = []
    for beta in (0.25, 4.0):
        e = init_ensemble(rest_config(N=4000, initial=Maxwellian(beta=beta)))
        step_collisions(e, kernel, 1.0, 0.5, 2.0)
        counts.append(e.collisions)
    # every candidate is accepted: 0.5 * 3999 * 2 * 0.5 pairs
    assert counts[0] == counts[1] == 1999


def test_soft_pair_below_floor_collides_at_exact_rate():
    kernel = KernelSpec(gamma=-1)
    velocities = np.array([[0.0, 0.0, 0.0], [0.05, 0.0, 0.0]])
    e = ParticleEnsemble(velocities=velocities, rng=replica_rng(3, 0), tau=0.0)
    # 2000 candidates of one pair at relative speed 0.05: rate 20 against majorant 40
    step_collisions(e, kernel, 1.0, 100.0, 40.0, speed_floor=0.2)
    assert e.candidates == 2000
    assert e.collisions / e.candidates == pytest.approx(0.5, abs=0.06)


def test_soft_acceptance_matches_rate_averaged_over_maxwellian():
    kernel = KernelSpec(gamma=-1)
    e = init_ensemble(rest_config(N=2000, kernel=kernel))
    step_collisions(e, kernel, 1.0, 1.0, 200.0, speed_floor=1.0)
    # relative velocities of exp(-|w|^2) samples have unit variance per component
    mean_rate = stats.maxwell.expect(lambda s: 1.0 / s)
    assert e.candidates == 199_900
    assert e.collisions / e.candidates == pytest.approx(mean_rate / 200.0, rel=0.12)


def test_retry_after_violation_reuses_candidates():
    velocities = np.random.default_rng(0).normal(size=(200, 3))
    e = ParticleEnsemble(velocities=velocities.copy(), rng=replica_rng(0, 0), tau=0.0)
    draws = CandidateDraws()
    with pytest.raises(MajorantViolation):
        step_collisions(e, KernelSpec(gamma=1), 1.0, 1.0, 0.1, draws=draws)
    assert len(draws) == 9
    assert e.candidates == 0
    first, second = draws.first.copy(), draws.second.copy()

    step_collisions(e, KernelSpec(gamma=1), 1.0, 1.0, 16.0, draws=draws)
    assert len(draws) == e.candidates == 1592
    np.testing.assert_array_equal(draws.first[:9], first)
    np.testing.assert_array_equal(draws.second[:9], second)


def test_rest_run_keeps_maxwellian_stationary():
    series = Runner.run_sync(rest_config())
    assert len(series.rows) == 11
    betas = series.column("beta")
    np.testing.assert_allclose(betas, 1.0, rtol=1e-9)
    np.testing.assert_allclose(series.column("mass"), 1.0)
    assert series.rows[-1].collisions > 0


def test_two_temperature_relaxes_toward_maxwellian():
    config = rest_config(duration=10.0, initial=TwoTemperature(beta_a=1.0, beta_b=4.0))
    series = Runner.run_sync(config)
    c4 = series.column("c4")
    assert abs(c4[-1]) < 0.5 * c4[0]


def test_run_is_deterministic(tmp_path):
    first = series_to_csv(Runner.run_sync(rest_config(replicas=2)))
    second = series_to_csv(Runner.run_sync(rest_config(replicas=2)))
    assert first == second
    assert first != series_to_csv(Runner.run_sync(rest_config(replicas=2, seed=1)))


def test_series_csv_round_trip_keeps_metadata(tmp_path):
    series = Runner.run_sync(rest_config())
    path = write_series_csv(series, tmp_path / "rest.csv")
    loaded = read_series_csv(path)
    assert len(loaded.rows) == len(series.rows)
    assert loaded.rows[-1].beta == series.rows[-1].beta
    assert loaded.metadata["config_hash"] == rest_config().fingerprint()


def test_replica_stderr_shrinks():
    single = Runner.run_sync(rest_config(initial=TwoTemperature(), replicas=1))
    several = Runner.run_sync(rest_config(initial=TwoTemperature(), replicas=4))
    ratio = several.rows[0].c4_stderr / single.rows[0].c4_stderr
    assert 0.35 < ratio < 0.65


def test_simple_shear_heats_the_gas():
    config = SimConfig(
        kernel=KernelSpec(gamma=0),
        duration=2.0,
        case=canonical_case("SimpleShear", K=1.0),
        N=2000,
        clock_ticks=20,
        output_stride=5,
    )
    series = Runner.run_sync(config)
    betas = series.column("beta")
    assert betas[-1] < betas[0]
    assert series.metadata["case"]["tag"] == "SimpleShear"


def test_linear_scaling_needs_positive_start():
    config = SimConfig(
        kernel=KernelSpec(gamma=2),
        duration=5.0,
        case=canonical_case("CombinedOrthogonalShear", K1=1.0, K2=0.0, K3=1.0),
    )
    with pytest.raises(ConfigError) as exc:
        build_frame(config)
    assert exc.value.field == "t_start"


def test_dilatation_frame_needs_homogeneous_dilatation():
    config = SimConfig(
        kernel=KernelSpec(gamma=-3),
        duration=5.0,
        case=canonical_case("SimpleShear", K=1.0),
        frame="dilatation",
    )
    with pytest.raises(ConfigError):
        build_frame(config)


async def test_failed_replica_carries_run_data(mocker):
    mocker.patch(
        "homokinetics.dsmc.runner.step_collisions",
        side_effect=MajorantViolation("too fast", rate=2.0, majorant=1.0),
    )
    with pytest.raises(MajorantViolation) as exc:
        await Runner.run(rest_config(name="broken"))
    assert exc.value.run_data is not None
    assert exc.value.run_data.scenario == "broken"
    assert exc.value.run_data.replica == 0

    spans = fetch_normalized_spans()
    assert spans[0]["type"] == "replica"
    assert spans[0]["error"]["message"] == "too fast"


async def test_hooks_see_every_replica():
    events: list[str] = []

    class RecordingHooks(SimulationHooks):
        async def on_run_start(self, config):
            events.append("start")

        async def on_replica_start(self, config, replica):
            events.append(f"replica_start_{replica}")

        async def on_replica_end(self, config, replica, rows, usage):
            events.append(f"replica_end_{replica}")

        async def on_run_end(self, config, series):
            events.append(f"end_{len(series.rows)}")

    await Runner.run(rest_config(replicas=3, N=200), hooks=RecordingHooks(), max_workers=1)
    assert events[0] == "start"
    assert events[-1] == "end_11"
    assert sorted(e for e in events if e.startswith("replica_end")) == [
        "replica_end_0",
        "replica_end_1",
        "replica_end_2",
    ]


async def test_replica_spans_record_usage():
    await Runner.run(rest_config(replicas=2, N=200))
    spans = fetch_normalized_spans()
    assert [span["type"] for span in spans] == ["replica", "replica"]
    for span in spans:
        assert span["data"]["rows"] == 11
        assert span["data"]["particles"] == 200
        assert span["data"]["collisions"] > 0
