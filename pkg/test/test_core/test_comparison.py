import numpy as np
import pytest

from covercalc.core.comparison import (
    AXIS_NAMES,
    Choice,
    GridSpec,
    IndifferenceMode,
    SurfaceKind,
    _find_root,
    affordability_points,
    budget_choice,
    budget_constrained_indemnity,
    budget_constrained_parametric,
    delta_mv_budget,
    indifference_budget,
    indifference_gamma_d,
    indifference_theta_d,
    mv_gap_matched,
    mv_gap_optimal,
    premium_matched_k,
    surface,
)
from covercalc.core.exceptions import CoreValueError, NoRootError
from covercalc.core.objective import mv_indemnity, mv_no_insurance, mv_parametric


def test_matched_payment(scenario):
    """Test that equal pricing matches k to the expected excess."""
    matched = premium_matched_k(scenario, 22_500)
    assert matched.k == pytest.approx(scenario.sev.excess_mean(22_500), rel=1e-12)
    assert not matched.capped and not matched.floored


def test_matched_payment_capped(scenario):
    """Test that an expensive indemnity premium buys at most k = L."""
    s = scenario.with_indemnity(fixed_cost=20_000.0)
    matched = premium_matched_k(s, 0.0)
    assert matched.k == s.sev.cap and matched.capped


def test_matched_payment_floored(scenario):
    """Test that a parametric fixed cost above the premium gives k = 0."""
    s = scenario.with_parametric(fixed_cost=20_000.0)
    matched = premium_matched_k(s, s.sev.cap)
    assert matched.k == 0.0 and matched.floored


def test_gap_matched_at_cap(scenario):
    """Test that both matched contracts pay nothing at d = L."""
    assert mv_gap_matched(scenario, scenario.sev.cap) == pytest.approx(0, abs=1e-6)


def test_gap_optimal(scenario):
    """Test that indemnity wins at the calibration."""
    assert mv_gap_optimal(scenario) == pytest.approx(-4_210.1, abs=0.1)


def test_indifference_gamma(scenario):
    """Test both fixed-cost thresholds of the calibration."""
    optimal = indifference_gamma_d(scenario, IndifferenceMode.OPTIMAL_BOTH)
    matched = indifference_gamma_d(scenario, IndifferenceMode.PREMIUM_MATCHED)
    assert optimal.root == pytest.approx(3_238.56, abs=0.01)
    assert matched.root == pytest.approx(9_980.06, abs=0.01)
    assert optimal.residual == pytest.approx(0, abs=1e-6)
    assert matched.residual == pytest.approx(0, abs=1e-3)
    assert matched.bracket == (0.0, 50_000.0)
    assert optimal.target == "gamma_d"


def test_indifference_theta(scenario):
    """Test both loading thresholds of the calibration."""
    optimal = indifference_theta_d(scenario, IndifferenceMode.OPTIMAL_BOTH)
    matched = indifference_theta_d(scenario, IndifferenceMode.PREMIUM_MATCHED)
    assert optimal.root == pytest.approx(1.29, abs=0.01)
    assert matched.root == pytest.approx(1.57, abs=0.01)
    high = 2 * scenario.beta * scenario.sev.cap - 1e-6
    assert optimal.bracket[1] == pytest.approx(high)


def test_indifference_theta_lower_parametric_loading(scenario):
    """Test the loading thresholds with theta_p = 0.2."""
    s = scenario.with_parametric(loading=0.2)
    optimal = indifference_theta_d(s, IndifferenceMode.OPTIMAL_BOTH)
    matched = indifference_theta_d(s, IndifferenceMode.PREMIUM_MATCHED)
    assert optimal.root == pytest.approx(1.1607, abs=1e-3)
    assert matched.root == pytest.approx(1.5732, abs=1e-3)


def test_indifference_without_root(scenario):
    """Test that no threshold exists when parametric wins even at gamma_d = 0."""
    s = scenario.with_indemnity(loading=1.5)
    with pytest.raises(NoRootError):
        indifference_gamma_d(s, IndifferenceMode.OPTIMAL_BOTH)
    with pytest.raises(NoRootError):
        indifference_theta_d(
            scenario.with_parametric(loading=7.0), IndifferenceMode.OPTIMAL_BOTH
        )


def test_budget_zero(scenario):
    """Test that nothing is bought without a budget."""
    parametric = budget_constrained_parametric(scenario, 0.0)
    indemnity = budget_constrained_indemnity(scenario, 0.0)
    assert parametric.choice is Choice.NO_INSURANCE and parametric.tie
    assert indemnity.choice is Choice.NO_INSURANCE
    assert delta_mv_budget(scenario, 0.0) == 0.0
    no_cover = mv_no_insurance(scenario)
    assert budget_choice(parametric, indemnity, no_cover) is Choice.NO_INSURANCE


def test_budget_infeasible_indemnity(budget_scenario):
    """Test that indemnity is infeasible exactly below (1 + theta_d) gamma_d."""
    s = budget_scenario
    assert not budget_constrained_indemnity(s, 1_299.99).feasible
    assert budget_constrained_indemnity(s, 1_300.0).feasible

    parametric = budget_constrained_parametric(s, 1_000.0)
    indemnity = budget_constrained_indemnity(s, 1_000.0)
    assert parametric.choice is Choice.PARAMETRIC
    assert parametric.parameter == pytest.approx(1_000 / 1.3 / 0.02)
    assert budget_choice(parametric, indemnity, mv_no_insurance(s)) is Choice.PARAMETRIC


def test_budget_choices(budget_scenario):
    """Test the contracts bought with budgets of 2,000 and 3,000."""
    s = budget_scenario
    parametric = budget_constrained_parametric(s, 3_000.0)
    assert parametric.spent == pytest.approx(3_000.0)
    assert parametric.mv > mv_no_insurance(s)

    indemnity = budget_constrained_indemnity(s, 2_000.0)
    assert indemnity.choice is Choice.INDEMNITY
    assert indemnity.spent == pytest.approx(2_000.0)
    assert indemnity.mv > mv_no_insurance(s)


def test_delta_budget_values(budget_scenario):
    """Test the budget difference along the sweep of the calibration."""
    expected = {1_000: 2_301.45, 3_000: 621.86, 4_000: -661.41, 12_000: -2_910.13}
    for budget, delta in expected.items():
        delta_mv = delta_mv_budget(budget_scenario, budget)
        assert delta_mv == pytest.approx(delta, abs=0.01)


def test_budget_curves(budget_scenario):
    """Test that constrained values rise in the budget and are flat once affordable."""
    s = budget_scenario
    budgets = np.linspace(0, 12_000, 241)
    parametric = np.array([budget_constrained_parametric(s, b).mv for b in budgets])
    indemnity = np.array([budget_constrained_indemnity(s, b).mv for b in budgets])
    assert np.all(np.diff(parametric) >= -1e-9)
    assert np.all(np.diff(indemnity) >= -1e-9)

    points = affordability_points(s)
    assert points.minimum_indemnity == pytest.approx(1_300)
    beyond = budgets > max(points.optimal_indemnity, points.optimal_parametric)
    assert np.ptp(parametric[beyond]) == pytest.approx(0, abs=1e-9)
    assert np.ptp(indemnity[beyond]) == pytest.approx(0, abs=1e-9)


def test_budget_large_without_frictions(scenario):
    """Test that indemnity wins at zero frictions once both optima are affordable."""
    assert delta_mv_budget(scenario, 12_000) <= 0


def test_indifference_budget(budget_scenario):
    """Test that the sweep has exactly one crossing and it is found."""
    s = budget_scenario
    budgets = np.linspace(0, 12_000, 241)
    deltas = np.array([delta_mv_budget(s, b) for b in budgets])
    crossings = np.sum((deltas[:-1] > 0) & (deltas[1:] <= 0))
    assert crossings == 1

    root = indifference_budget(s, 0, 12_000, 241)
    assert 3_000 < root < 3_450
    assert delta_mv_budget(s, root) == pytest.approx(0, abs=1e-3)


def test_indifference_budget_none(scenario):
    """Test that no crossing gives None."""
    assert indifference_budget(scenario, 20_000, 30_000, 11) is None


def test_negative_budget(scenario):
    """Test that a negative budget is rejected."""
    with pytest.raises(CoreValueError):
        budget_constrained_parametric(scenario, -1.0)


def test_grid_spec():
    """Test grid validation and the default grids."""
    with pytest.raises(CoreValueError):
        GridSpec("d", 1.0, 0.0, 3, "gamma_d", 0.0, 1.0, 3)
    with pytest.raises(CoreValueError):
        GridSpec("d", 0.0, 1.0, 1, "gamma_d", 0.0, 1.0, 3)


def test_default_grids(scenario):
    """Test the default ranges of the three surfaces."""
    for kind in SurfaceKind:
        grid = GridSpec.default(kind, scenario)
        assert (grid.axis1_name, grid.axis2_name) == AXIS_NAMES[kind]
        assert grid.axis1_steps == grid.axis2_steps == 201
    assert GridSpec.default(SurfaceKind.PREMIUM_MATCH_D_GAMMA, scenario).axis1_max == (
        scenario.sev.cap
    )


def test_surface_order_and_values(scenario):
    """Test row-major order and that each cell equals the direct evaluation."""
    grid = GridSpec("d", 0.0, 45_000.0, 3, "gamma_d", 0.0, 15_000.0, 2)
    cells = surface(scenario, grid, SurfaceKind.PREMIUM_MATCH_D_GAMMA)
    assert [(c.axis1_value, c.axis2_value) for c in cells] == [
        (0.0, 0.0),
        (0.0, 15_000.0),
        (22_500.0, 0.0),
        (22_500.0, 15_000.0),
        (45_000.0, 0.0),
        (45_000.0, 15_000.0),
    ]
    for cell in cells:
        s = scenario.with_indemnity(fixed_cost=cell.axis2_value)
        k = premium_matched_k(s, cell.axis1_value).k
        direct = mv_parametric(s, k) - mv_indemnity(s, cell.axis1_value)
        assert cell.delta_mv == pytest.approx(direct, abs=1e-12)

    at_optimum = cells[2]
    assert at_optimum.delta_mv <= 0
    assert at_optimum.chosen is Choice.INDEMNITY


def test_surface_theta(scenario):
    """Test the loading surface at d*(theta_d)."""
    grid = GridSpec("theta_d", 0.3, 2.0, 3, "gamma_d", 0.0, 15_000.0, 3)
    cells = surface(scenario, grid, SurfaceKind.PREMIUM_MATCH_THETA_GAMMA)
    assert len(cells) == 9
    assert cells[0].chosen is Choice.INDEMNITY
    assert cells[-1].chosen is Choice.PARAMETRIC


def test_surface_budget(budget_scenario):
    """Test the infeasibility flag of the budget surface."""
    grid = GridSpec("budget", 0.0, 2_600.0, 3, "gamma_d", 1_000.0, 2_000.0, 2)
    cells = surface(budget_scenario, grid, SurfaceKind.BUDGET_P_GAMMA)
    flags = [(c.axis1_value, c.axis2_value, c.indemnity_infeasible) for c in cells]
    assert flags == [
        (0.0, 1_000.0, True),
        (0.0, 2_000.0, True),
        (1_300.0, 1_000.0, False),
        (1_300.0, 2_000.0, True),
        (2_600.0, 1_000.0, False),
        (2_600.0, 2_000.0, False),
    ]
    assert cells[0].chosen is Choice.NO_INSURANCE


def test_surface_wrong_axes(scenario):
    """Test that the axes must match the kind."""
    grid = GridSpec("d", 0.0, 1.0, 2, "gamma_d", 0.0, 1.0, 2)
    with pytest.raises(CoreValueError):
        surface(scenario, grid, SurfaceKind.BUDGET_P_GAMMA)


def test_default_loading_axis(scenario):
    """Test that the loading axis starts one step above 0.2 and ends at 2.0."""
    grid = GridSpec.default(SurfaceKind.PREMIUM_MATCH_THETA_GAMMA, scenario)
    values = grid.axis1_values()
    assert values[0] > 0.2
    assert values[0] == pytest.approx(0.2 + 1.8 / 201)
    assert values[-1] == 2.0


def test_root_on_last_scan_point():
    """Test that a zero on the upper end of the bracket is found."""
    assert _find_root(lambda x: x - 1.0, 0.0, 1.0, 1e-9) == (1.0, 0)
    assert _find_root(lambda x: x, 0.0, 1.0, 1e-9) == (0.0, 0)
    with pytest.raises(NoRootError):
        _find_root(lambda x: x + 1.0, 0.0, 1.0, 1e-9)


def test_surface_theta_changes_sign_at_threshold(scenario):
    """Test that the loading surface changes sign once, between 1.57 and 1.58."""
    grid = GridSpec("theta_d", 1.50, 1.65, 16, "gamma_d", 0.0, 15_000.0, 2)
    cells = surface(scenario, grid, SurfaceKind.PREMIUM_MATCH_THETA_GAMMA)
    row = [c for c in cells if c.axis2_value == 0.0]
    assert len(row) == 16
    by_theta = {round(c.axis1_value, 2): c.delta_mv for c in row}
    assert by_theta[1.56] < 0
    assert by_theta[1.58] > 0
    signs = np.sign([c.delta_mv for c in row])
    assert np.count_nonzero(np.diff(signs)) == 1
