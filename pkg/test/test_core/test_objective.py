import logging

import numpy as np
import pytest

from covercalc.core.exceptions import CoreValueError, NonMonotoneFOCError
from covercalc.core.objective import (
    Preferences,
    Scenario,
    deductible_optimum,
    duality_gap,
    general_deductible_optimum,
    general_parametric_optimum,
    is_tie,
    mv_indemnity,
    mv_indemnity_derivative,
    mv_indemnity_second_derivative,
    mv_no_insurance,
    mv_parametric,
    mv_parametric_derivative,
    mv_parametric_second_derivative,
    optimal_deductible,
    optimal_parametric,
    parametric_optimum,
)
from covercalc.core.oracle import DesignKind, grid_search_optimum
from covercalc.core.severity import SeverityModel
from test.conftest import random_scenario


def test_preferences():
    """Test normalised and invalid preferences."""
    assert Preferences.normalized(150_000).risk_aversion == pytest.approx(1 / 150_000)
    with pytest.raises(CoreValueError):
        Preferences(150_000, 0.0)
    with pytest.raises(CoreValueError):
        Preferences(-1.0, 1e-5)


def test_no_insurance(scenario):
    """Test the value without cover."""
    assert mv_no_insurance(scenario) == pytest.approx(131_023.2061, abs=1e-3)


def test_risk_neutral(scenario):
    """Test that without risk aversion only the expected loss counts."""
    s = Scenario(Preferences.risk_neutral(150_000), scenario.sev, scenario.freq)
    expected = 150_000 - scenario.freq.mean * scenario.sev.mean()
    assert mv_no_insurance(s) == pytest.approx(expected, rel=1e-14)


def test_boundary_contracts_equal_no_cover(scenario):
    """Test that d = L and k = 0 without fixed costs leave wealth uncovered."""
    mv0 = mv_no_insurance(scenario)
    assert mv_indemnity(scenario, scenario.sev.cap) == pytest.approx(mv0, rel=1e-14)
    assert mv_parametric(scenario, 0.0) == pytest.approx(mv0, rel=1e-14)


def test_full_cover(scenario):
    """Test that full cover leaves only the premium."""
    expected = 150_000 - 1.3 * scenario.freq.mean * scenario.sev.mean()
    assert mv_indemnity(scenario, 0.0) == pytest.approx(expected, rel=1e-12)


def test_baseline_optima(scenario):
    """Test d* = 22,500 and k* = E[Y] - 22,500."""
    d = optimal_deductible(scenario)
    k = optimal_parametric(scenario)
    assert d.parameter == pytest.approx(22_500, abs=1e-6)
    assert k.parameter == pytest.approx(243_622.1372, abs=1e-3)
    assert not d.clamped and not k.clamped
    assert d.premium == pytest.approx(6_352.58, abs=0.01)
    assert k.premium == pytest.approx(6_334.18, abs=0.01)
    assert d.mv_value > k.mv_value > mv_no_insurance(scenario)


def test_zero_loading(scenario):
    """Test that free cover is bought in full."""
    s = scenario.with_indemnity(loading=0.0).with_parametric(loading=0.0)
    assert optimal_deductible(s).parameter == 0.0
    assert optimal_parametric(s).parameter == pytest.approx(s.sev.mean())


def test_clamped_optimum(scenario, caplog):
    """Test that a loading beyond 2 beta L projects d* onto L with a warning."""
    s = scenario.with_indemnity(loading=10.0).with_parametric(loading=100.0)
    with caplog.at_level(logging.WARNING):
        d = optimal_deductible(s)
        k = optimal_parametric(s)
    assert d.parameter == s.sev.cap and d.clamped
    assert k.parameter == 0.0 and k.clamped
    assert "projected" in caplog.text


def test_first_derivative(scenario):
    """Test the deductible slope against a central difference at 50 random points."""
    rng = np.random.default_rng(5)
    h = 1.0
    for d in rng.uniform(1.0, scenario.sev.cap - 1.0, 50):
        numeric = (mv_indemnity(scenario, d + h) - mv_indemnity(scenario, d - h)) / (
            2 * h
        )
        assert mv_indemnity_derivative(scenario, d) == pytest.approx(
            numeric, rel=1e-5, abs=1e-8
        )
    assert mv_indemnity_derivative(scenario, 22_500) == pytest.approx(0, abs=1e-15)


def test_derivative_changes_sign_at_optimum(scenario, poisson_scenarios):
    """Test that the deductible slope is positive below d* and negative above."""
    for s in [scenario, *poisson_scenarios]:
        d = optimal_deductible(s).parameter
        if 1.01 * d > s.sev.cap:
            continue
        assert mv_indemnity_derivative(s, 0.99 * d) > 0
        assert mv_indemnity_derivative(s, 1.01 * d) < 0


def test_second_derivatives(scenario):
    """Test the curvature of both objectives."""
    k, h = 200_000.0, 1_000.0
    second = (
        mv_parametric(scenario, k + h)
        - 2 * mv_parametric(scenario, k)
        + mv_parametric(scenario, k - h)
    ) / h**2
    expected = -2 * scenario.beta * scenario.freq.mean
    assert mv_parametric_second_derivative(scenario) == pytest.approx(expected)
    assert second == pytest.approx(expected, rel=1e-4)
    assert mv_indemnity_second_derivative(scenario, 22_500) < 0

    d, step = 50_000.0, 10.0
    numeric = (
        mv_indemnity_derivative(scenario, d + step)
        - mv_indemnity_derivative(scenario, d - step)
    ) / (2 * step)
    assert mv_indemnity_second_derivative(scenario, d) == pytest.approx(
        numeric, rel=1e-5
    )


def test_parametric_derivative(scenario):
    """Test that the parametric slope vanishes at k*."""
    k = optimal_parametric(scenario).parameter
    assert mv_parametric_derivative(scenario, k) == pytest.approx(0, abs=1e-12)


def test_vectorised_objective(scenario):
    """Test that the objectives accept arrays."""
    grid = np.linspace(0, scenario.sev.cap, 5)
    assert mv_indemnity(scenario, grid).shape == (5,)
    assert mv_parametric(scenario, grid).shape == (5,)


def test_payment_above_cap(scenario):
    """Test that a payment above L is rejected."""
    with pytest.raises(CoreValueError):
        mv_parametric(scenario, scenario.sev.cap + 1)


def test_duality(poisson_scenarios):
    """Test d* + k* = E[Y] for equal loadings and interior optima."""
    for s in poisson_scenarios:
        gap = duality_gap(s)
        assert gap.holds
        assert abs(gap.gap) < 1e-9 * s.sev.mean()


def test_duality_different_loadings(scenario, caplog):
    """Test that the gap is (theta_d - theta_p) / (2 beta) with a warning."""
    s = scenario.with_parametric(loading=0.2)
    with caplog.at_level(logging.WARNING):
        gap = duality_gap(s)
    assert gap.gap == pytest.approx(7_500, abs=1e-6)
    assert gap.violations == ("loadings differ",)
    assert "Duality" in caplog.text


def test_duality_fails_for_general_counts(general_scenarios):
    """Test that overdispersed counts break the identity."""
    for s in general_scenarios:
        gap = duality_gap(s)
        assert "counts are not Poisson" in gap.violations
        assert abs(gap.gap) > 1e-9 * s.sev.mean()


def test_closed_forms_need_poisson(overdispersed):
    """Test that the Poisson optima refuse general counts."""
    with pytest.raises(CoreValueError):
        optimal_deductible(overdispersed)
    with pytest.raises(CoreValueError):
        optimal_parametric(overdispersed)


def test_general_parametric(overdispersed):
    """Test k* = E[Y] - (mu / sigma^2) theta_p / (2 beta) for sigma^2 = 2 mu."""
    k = general_parametric_optimum(overdispersed)
    assert k.parameter == pytest.approx(overdispersed.sev.mean() - 11_250, abs=1e-6)
    assert parametric_optimum(overdispersed) == k


def test_general_deductible(overdispersed):
    """Test the general deductible: d + E[min(Y, d)] = theta_d / (2 beta)."""
    d = general_deductible_optimum(overdispersed).parameter
    assert d + overdispersed.sev.retained_mean(d) == pytest.approx(22_500, abs=1e-4)
    assert 11_250 < d < 22_500
    assert deductible_optimum(overdispersed).parameter == d


def test_general_deductible_poisson(scenario):
    """Test that the general condition gives theta_d / (2 beta) for Poisson counts."""
    d = general_deductible_optimum(scenario).parameter
    assert d == pytest.approx(22_500, abs=1e-5)


def test_general_deductible_zero_loading(overdispersed):
    """Test that free cover is bought in full under general counts."""
    s = overdispersed.with_indemnity(loading=0.0)
    assert general_deductible_optimum(s).parameter == 0.0


def test_non_monotone_condition(overdispersed, monkeypatch):
    """Test that a decreasing first-order condition is reported."""
    monkeypatch.setattr(
        SeverityModel, "retained_mean", lambda self, d: 1e6 - 10 * np.asarray(d)
    )
    with pytest.raises(NonMonotoneFOCError):
        general_deductible_optimum(overdispersed)


def test_grid_search(scenario):
    """Test that a grid search finds both optima within one step."""
    points = 100_000
    step = scenario.sev.cap / (points - 1)
    d = grid_search_optimum(scenario, DesignKind.INDEMNITY, points)
    k = grid_search_optimum(scenario, DesignKind.PARAMETRIC, points)
    assert d == pytest.approx(22_500, abs=step)
    assert k == pytest.approx(optimal_parametric(scenario).parameter, abs=step)


def test_grid_search_random():
    """Test the optima of 15 Poisson and 5 general scenarios by grid search."""
    rng = np.random.default_rng(11)
    scenarios = [random_scenario(rng) for _ in range(15)]
    scenarios += [random_scenario(rng, dispersion=2.0) for _ in range(5)]
    points = 100_000
    for s in scenarios:
        step = s.sev.cap / (points - 1)
        d = grid_search_optimum(s, DesignKind.INDEMNITY, points)
        k = grid_search_optimum(s, DesignKind.PARAMETRIC, points)
        assert d == pytest.approx(deductible_optimum(s).parameter, abs=step)
        assert k == pytest.approx(parametric_optimum(s).parameter, abs=step)


def test_grid_search_too_coarse(scenario):
    """Test that fewer than 1000 points are rejected."""
    with pytest.raises(CoreValueError):
        grid_search_optimum(scenario, DesignKind.INDEMNITY, 999)


def test_is_tie():
    """Test the relative tie tolerance."""
    assert is_tie(131_023.0, 131_023.0 * (1 + 1e-10))
    assert not is_tie(131_023.0, 131_023.0 * (1 + 1e-8))


def test_fixed_costs_shift_values_only(poisson_scenarios, general_scenarios):
    """Test that fixed costs leave both optima unchanged and lower each value."""
    rng = np.random.default_rng(13)
    for s in [*poisson_scenarios, *general_scenarios]:
        gamma_d, gamma_p = (float(x) for x in rng.uniform(0.0, 20_000.0, 2))
        costly = s.with_indemnity(fixed_cost=gamma_d).with_parametric(
            fixed_cost=gamma_p
        )
        d, d_costly = deductible_optimum(s), deductible_optimum(costly)
        k, k_costly = parametric_optimum(s), parametric_optimum(costly)
        assert d_costly.parameter == d.parameter
        assert k_costly.parameter == k.parameter

        theta_d = s.indemnity_pricing.loading
        theta_p = s.parametric_pricing.loading
        assert d_costly.mv_value - d.mv_value == pytest.approx(
            -(1 + theta_d) * gamma_d, rel=1e-9, abs=1e-6
        )
        assert k_costly.mv_value - k.mv_value == pytest.approx(
            -(1 + theta_p) * gamma_p, rel=1e-9, abs=1e-6
        )
