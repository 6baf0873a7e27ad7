from __future__ import annotations

import math

import numpy as np
import pytest
from inline_snapshot import snapshot

from homokinetics import (
    DomainError,
    MissingB,
    beta_ode,
    canonical_case,
    case1_rate,
    collision_dominance,
    late_time_law,
    predict,
    regime_table,
)
from homokinetics.hilbert import GammaRange

SIMPLE_SHEAR = canonical_case("SimpleShear", K=1.0)
PLANAR = canonical_case("PlanarShear", K=0.0)
DILATATION = canonical_case("HomogeneousDilatation")
ORTHOGONAL = canonical_case("CombinedOrthogonalShear", K1=1.0, K2=0.0, K3=1.0)
CYLINDRICAL = canonical_case("CylindricalDilatation")
DECAYING = canonical_case("SimpleShearDecayingDilatation", K1=0.0, K2=1.0, K3=0.0)


def test_simple_shear_law():
    prediction = predict(SIMPLE_SHEAR, 1)
    assert prediction.regime == "Case2PowerLaw"
    assert prediction.beta_exponent == -2
    assert prediction.to_json() == snapshot(
        {
            "case": {
                "tag": "SimpleShear",
                "constants": {"K": 1.0},
                "basis": [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            },
            "gamma": 1,
            "regime": "Case2PowerLaw",
            "label": "HilbertExpansion",
            "exponent": -2.0,
            "exponent_expr": "-2",
            "prefactor": None,
            "b": None,
            "validity": "gamma > 0",
            "coordinate": "t",
            "asymptotic_only": True,
            "note": None,
        }
    )


def test_planar_shear_law_is_exponential_in_tau():
    prediction = predict(PLANAR, -1)
    assert prediction.regime == "Case1Exponential"
    assert prediction.beta_exponent == pytest.approx(2.0 / 3.0)
    assert prediction.exponent_expr == "2/3"
    assert prediction.coordinate == "tau"


def test_homogeneous_dilatation_law():
    prediction = predict(DILATATION, -3)
    assert prediction.regime == "Case1Exponential"
    assert prediction.beta_exponent == pytest.approx(2.0)
    assert prediction.note is None
    assert "s = tau" in predict(DILATATION, -2).note


def test_combined_orthogonal_shear_law():
    prediction = predict(ORTHOGONAL, 2)
    assert prediction.regime == "Case2PowerLaw"
    assert prediction.beta_exponent == -3
    assert prediction.exponent_expr == "-3"


def test_decaying_dilatation_law():
    prediction = predict(DECAYING, 1, b=0.5, prefactor=True)
    assert prediction.regime == "ShearDilatationPowerLaw"
    assert prediction.beta_exponent == -4
    assert prediction.prefactor == pytest.approx((4 * 0.5 / 7) ** -2)


def test_frozen_collisions_are_out_of_scope():
    prediction = predict(CYLINDRICAL, -1)
    assert prediction.regime == "OutOfScope"
    assert prediction.label == "FrozenCollisions"
    assert prediction.beta_exponent is None
    assert not prediction.is_power_law


def test_exponent_is_exact_rational():
    assert predict(SIMPLE_SHEAR, 0.5).exponent_expr == "-4"
    assert predict(SIMPLE_SHEAR, 1.5).exponent_expr == "-4/3"


def test_prefactor_needs_b():
    with pytest.raises(MissingB):
        predict(SIMPLE_SHEAR, 1, prefactor=True)


def test_simple_shear_prefactor_matches_late_time_law():
    b = 0.7
    prediction = predict(SIMPLE_SHEAR, 1, b=b, prefactor=True)
    t = 1e4
    assert prediction.prefactor * t**prediction.beta_exponent == pytest.approx(
        late_time_law(1.0, b, t)
    )


@pytest.mark.parametrize(
    "tag, gamma, label",
    [
        ("SimpleShear", 1, "HilbertExpansion"),
        ("SimpleShear", 0, "SelfSimilar"),
        ("SimpleShear", -1, "NonMaxwellian"),
        ("PlanarShear", -1, "HilbertExpansion"),
        ("PlanarShear", 0, "SelfSimilar"),
        ("PlanarShear", 1, "NonMaxwellian"),
        ("CylindricalDilatation", -2, "HilbertExpansion"),
        ("CylindricalDilatation", -1, "FrozenCollisions"),
        ("CylindricalDilatationShear", 1, "FrozenCollisions"),
        ("HomogeneousDilatation", -2, "HilbertExpansion"),
        ("HomogeneousDilatation", -1, "NonMaxwellian"),
        ("CombinedOrthogonalShear", 2, "HilbertExpansion"),
        ("CombinedOrthogonalShear", -1, "NonMaxwellian"),
        ("SimpleShearDecayingDilatation", 1, "HilbertExpansion"),
    ],
)
def test_regime_table(tag, gamma, label):
    assert regime_table(tag, gamma) == label


def test_regime_table_rejects_unknown_case():
    with pytest.raises(DomainError):
        regime_table("Vortex", 1)  # type: ignore[arg-type]


def test_gamma_range():
    closed = GammaRange(upper=-2.0, closed=True)
    assert closed.contains(-2.0)
    assert not closed.contains(-1.0)
    assert str(closed) == "gamma <= -2"
    assert not GammaRange(lower=0.0).contains(0.0)
    assert str(GammaRange()) == "all gamma"


def test_case1_rate():
    assert case1_rate(np.eye(3)) == pytest.approx(2.0)
    assert case1_rate(np.diag([0.0, 0.0, 1.0])) == pytest.approx(2.0 / 3.0)
    with pytest.raises(DomainError):
        case1_rate(np.zeros((3, 3)))


@pytest.mark.parametrize(
    "case, gamma",
    [(SIMPLE_SHEAR, 1), (PLANAR, -1), (DILATATION, -3), (ORTHOGONAL, 2), (DECAYING, 1)],
)
def test_predicted_laws_are_collision_dominated(case, gamma):
    result = collision_dominance(case, gamma)
    assert result.dominated
    assert result.limit == "oo"


def test_critical_dilatation_is_balanced():
    result = collision_dominance(DILATATION, -2)
    assert not result.dominated
    assert result.limit == "1"


def test_collision_dominance_needs_a_law():
    with pytest.raises(DomainError):
        collision_dominance(CYLINDRICAL, -1)


def test_beta_ode_matches_closed_form():
    grid = np.linspace(0.0, 100.0, 201)
    trajectory = beta_ode("SimpleShear", 2.0, 3.0 / 8.0, lambda t: 1.0, 1.0, grid)
    np.testing.assert_allclose(trajectory.beta, 1.0 / (1.0 + grid), rtol=1e-6)
    np.testing.assert_allclose(trajectory.closed_form, 1.0 / (1.0 + grid), rtol=1e-12)
    assert trajectory.beta[-1] == pytest.approx(late_time_law(2.0, 3.0 / 8.0, 100.0), rel=0.02)


def test_beta_ode_without_heating_is_constant():
    trajectory = beta_ode(SIMPLE_SHEAR, 1.0, 0.0, lambda t: 1.0, 2.0, [0.0, 1.0, 10.0])
    np.testing.assert_allclose(trajectory.beta, 2.0)
    assert trajectory.closed_form is None


def test_beta_ode_lambda_quadrature():
    grid = np.linspace(1.0, 400.0, 100)
    trajectory = beta_ode(ORTHOGONAL, 2.0, 0.5, math.sqrt, 1.0, grid)
    np.testing.assert_allclose(trajectory.lam, 2.0 * (np.sqrt(grid) - 1.0), rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(trajectory.beta, trajectory.closed_form, rtol=1e-6)


def test_decaying_dilatation_ode_approaches_its_law():
    grid = np.geomspace(1.0, 1e4, 50)
    trajectory = beta_ode(DECAYING, 1.0, 0.5, lambda t: 1.0 / t, 1.0, grid)
    assert trajectory.beta[-1] == pytest.approx(trajectory.closed_form[-1], rel=1e-3)


def test_beta_ode_rejects_bad_input():
    with pytest.raises(DomainError):
        beta_ode(SIMPLE_SHEAR, 1.0, 0.5, lambda t: 1.0, 1.0, [1.0, 0.5])
    with pytest.raises(DomainError):
        beta_ode(SIMPLE_SHEAR, 1.0, 0.5, lambda t: 0.0, 1.0, [0.0, 1.0])
    with pytest.raises(DomainError):
        beta_ode(DECAYING, 1.0, 0.5, lambda t: 1.0, 1.0, [0.0, 1.0])
    with pytest.raises(DomainError):
        late_time_law(-1.0, 0.5, 1.0)
