import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from covercalc.core.exceptions import CoreValueError, NoRootError
from covercalc.core.objective import (
    Scenario,
    deductible_optimum,
    is_tie,
    mv_indemnity,
    mv_no_insurance,
    mv_parametric,
    parametric_optimum,
)
from covercalc.core.pricing import (
    indemnity_premium,
    invert_indemnity_premium,
    invert_parametric_premium,
    minimum_indemnity_premium,
    parametric_premium,
)

GAMMA_MAX: float = 50_000.0
GAMMA_XTOL: float = 1e-4
THETA_OFFSET: float = 1e-6
THETA_XTOL: float = 1e-6
ROOT_MAXITER: int = 200
SCAN_POINTS: int = 64


class Choice(Enum):
    """The contract held, or `TIE` when the best values coincide."""

    PARAMETRIC = "Parametric"
    INDEMNITY = "Indemnity"
    NO_INSURANCE = "NoInsurance"
    TIE = "Tie"


class IndifferenceMode(Enum):
    """How the parametric side of an indifference comparison is chosen.

    `OPTIMAL_BOTH` uses k*; `PREMIUM_MATCHED` spends the indemnity premium on
    parametric cover.
    """

    OPTIMAL_BOTH = "optimal"
    PREMIUM_MATCHED = "matched"


class SurfaceKind(Enum):
    """The three two-dimensional comparisons."""

    PREMIUM_MATCH_D_GAMMA = "dgamma"
    PREMIUM_MATCH_THETA_GAMMA = "thetagamma"
    BUDGET_P_GAMMA = "budget"


AXIS_NAMES: dict[SurfaceKind, tuple[str, str]] = {
    SurfaceKind.PREMIUM_MATCH_D_GAMMA: ("d", "gamma_d"),
    SurfaceKind.PREMIUM_MATCH_THETA_GAMMA: ("theta_d", "gamma_d"),
    SurfaceKind.BUDGET_P_GAMMA: ("budget", "gamma_d"),
}


@dataclass(frozen=True)
class MatchedPayment:
    """Parametric payment whose premium matches an indemnity premium."""

    k: float
    capped: bool
    floored: bool = False


@dataclass(frozen=True)
class BudgetChoice:
    """Best option of one design within a premium budget.

    Attributes
    ----------
        choice: Choice
            The design held, or `NO_INSURANCE`.
        parameter: float | None
            The deductible or payment held; None without cover.
        mv: float
            The mean-variance value reached.
        spent: float
            The premium actually paid, at most the budget.
        feasible: bool
            Whether the budget reaches the premium floor of the design.
        tie: bool
            Whether the contract tied with no insurance.

    """

    choice: Choice
    parameter: float | None
    mv: float
    spent: float
    feasible: bool = True
    tie: bool = False


@dataclass(frozen=True)
class IndifferenceResult:
    """Root of an MV difference together with how it was found."""

    target: str
    mode: IndifferenceMode
    root: float
    bracket: tuple[float, float]
    iterations: int
    residual: float


@dataclass(frozen=True)
class AffordabilityPoints:
    """Budgets at which each design becomes available or unconstrained."""

    minimum_indemnity: float
    optimal_indemnity: float
    optimal_parametric: float


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of two named axes with inclusive bounds."""

    axis1_name: str
    axis1_min: float
    axis1_max: float
    axis1_steps: int
    axis2_name: str
    axis2_min: float
    axis2_max: float
    axis2_steps: int

    def __post_init__(self) -> None:
        """Validate the axes."""
        for axis in ("axis1", "axis2"):
            low = getattr(self, f"{axis}_min")
            high = getattr(self, f"{axis}_max")
            steps = getattr(self, f"{axis}_steps")
            if not low < high:
                raise CoreValueError(f"{axis}: min {low} must be below max {high}.")
            if steps < 2:
                raise CoreValueError(f"{axis}: needs at least 2 steps, got {steps}.")

    @classmethod
    def default(cls, kind: SurfaceKind, s: Scenario) -> "GridSpec":
        """Return the default 201 x 201 grid of a surface kind.

        The loading axis covers (0.2, 2.0]; its first point lies one step above
        0.2.
        """
        name1, name2 = AXIS_NAMES[kind]
        if kind is SurfaceKind.PREMIUM_MATCH_D_GAMMA:
            return cls(name1, 0.0, s.sev.cap, 201, name2, 0.0, 15_000.0, 201)
        if kind is SurfaceKind.PREMIUM_MATCH_THETA_GAMMA:
            low = 0.2 + 1.8 / 201
            return cls(name1, low, 2.0, 201, name2, 0.0, 15_000.0, 201)
        return cls(name1, 0.0, 12_000.0, 201, name2, 0.0, 5_000.0, 201)

    def axis1_values(self) -> np.ndarray:
        """Return the values of the first axis."""
        return np.linspace(self.axis1_min, self.axis1_max, self.axis1_steps)

    def axis2_values(self) -> np.ndarray:
        """Return the values of the second axis."""
        return np.linspace(self.axis2_min, self.axis2_max, self.axis2_steps)


@dataclass(frozen=True)
class SurfaceCell:
    """One evaluated grid point. `delta_mv` is MV^(p) - MV^(d), untruncated."""

    axis1_value: float
    axis2_value: float
    delta_mv: float
    capped: bool
    indemnity_infeasible: bool
    chosen: Choice


def premium_matched_k(s: Scenario, d: float) -> MatchedPayment:
    """Return the payment k whose premium equals the indemnity premium at `d`.

    k = min{(P_d(d) / (1 + theta_p) - gamma_p) / E[N], L}; a negative value
    (gamma_p too large to match) becomes 0 with the floored flag set.
    """
    premium = indemnity_premium(s.sev, s.freq, s.indemnity_pricing, d)
    pricing = s.parametric_pricing
    raw: float = (premium / (1 + pricing.loading) - pricing.fixed_cost) / s.freq.mean
    if raw > s.sev.cap:
        return MatchedPayment(s.sev.cap, capped=True)
    if raw < 0:
        return MatchedPayment(0.0, capped=False, floored=True)
    return MatchedPayment(raw, capped=False)


def mv_gap_matched(s: Scenario, d: float) -> float:
    """Return MV^(p)(k matched to P_d(d)) - MV^(d)(d)."""
    matched = premium_matched_k(s, d)
    return mv_parametric(s, matched.k) - mv_indemnity(s, d)


def mv_gap_optimal(s: Scenario) -> float:
    """Return MV^(p)(k*) - MV^(d)(d*)."""
    return parametric_optimum(s).mv_value - deductible_optimum(s).mv_value


def indifference_gamma_d(s: Scenario, mode: IndifferenceMode) -> IndifferenceResult:
    """Return the indemnity fixed cost gamma_d at which both designs are equal.

    The indemnity contract sits at d*, which does not depend on gamma_d. With
    `OPTIMAL_BOTH` the indemnity value is affine in gamma_d with slope
    -(1 + theta_d), so the root is explicit; with `PREMIUM_MATCHED` it is found
    by scanning [0, GAMMA_MAX] and refining with `brentq`.

    Raises
    ------
        NoRootError: if the MV difference does not change sign on the bracket.

    """
    d: float = deductible_optimum(s).parameter
    bracket: tuple[float, float] = (0.0, GAMMA_MAX)

    def gap(gamma: float) -> float:
        priced = s.with_indemnity(fixed_cost=gamma)
        if mode is IndifferenceMode.OPTIMAL_BOTH:
            return parametric_optimum(priced).mv_value - mv_indemnity(priced, d)
        return mv_gap_matched(priced, d)

    if mode is IndifferenceMode.OPTIMAL_BOTH:
        slope: float = 1 + s.indemnity_pricing.loading
        root: float = -gap(0.0) / slope
        if not bracket[0] <= root <= bracket[1]:
            raise NoRootError(
                f"The fixed cost making both covers equal, {root}, is outside "
                f"{bracket}."
            )
        logging.debug("Closed form root %s of the fixed cost", root)
        return IndifferenceResult("gamma_d", mode, root, bracket, 0, gap(root))

    root, iterations = _find_root(gap, *bracket, xtol=GAMMA_XTOL)
    return IndifferenceResult("gamma_d", mode, root, bracket, iterations, gap(root))


def indifference_theta_d(s: Scenario, mode: IndifferenceMode) -> IndifferenceResult:
    """Return the indemnity loading theta_d at which both designs are equal.

    The indemnity contract is evaluated at d*(theta_d). The search runs over
    the loadings above theta_p that keep d* below L, that is up to
    theta_max = 2 beta L, where both premium-matched contracts pay nothing.

    Raises
    ------
        NoRootError: if the MV difference does not change sign on the bracket.

    """
    low: float = s.parametric_pricing.loading + THETA_OFFSET
    high: float = 2 * s.beta * s.sev.cap - THETA_OFFSET
    if not low < high:
        raise NoRootError(f"Empty loading range ({low}, {high}].")

    def gap(loading: float) -> float:
        priced = s.with_indemnity(loading=loading)
        d: float = deductible_optimum(priced).parameter
        if mode is IndifferenceMode.OPTIMAL_BOTH:
            return parametric_optimum(priced).mv_value - mv_indemnity(priced, d)
        return mv_gap_matched(priced, d)

    root, iterations = _find_root(gap, low, high, xtol=THETA_XTOL)
    return IndifferenceResult("theta_d", mode, root, (low, high), iterations, gap(root))


def budget_constrained_parametric(s: Scenario, budget: float) -> BudgetChoice:
    """Return the best parametric option within `budget`.

    The value is concave in k with its maximum at k*, so the best affordable
    payment is min{k*, k(budget), L}. No insurance is kept when it is at least
    as good.
    """
    _check_budget(budget)
    no_cover: float = mv_no_insurance(s)
    pricing = s.parametric_pricing
    if budget < pricing.premium_floor:
        return BudgetChoice(Choice.NO_INSURANCE, None, no_cover, 0.0, feasible=False)

    affordable = invert_parametric_premium(s.freq, pricing, budget)
    k: float = min(parametric_optimum(s).parameter, affordable, s.sev.cap)
    premium = parametric_premium(s.freq, pricing, k)
    return _against_no_cover(
        Choice.PARAMETRIC, k, mv_parametric(s, k), premium, no_cover
    )


def budget_constrained_indemnity(s: Scenario, budget: float) -> BudgetChoice:
    """Return the best indemnity option within `budget`.

    The value rises in d up to d* and falls after it, while the premium falls
    in d, so the best affordable deductible is max{d*, d(budget)}. Below the
    floor (1 + theta_d) gamma_d no contract is affordable.
    """
    _check_budget(budget)
    no_cover: float = mv_no_insurance(s)
    if budget < minimum_indemnity_premium(s.indemnity_pricing):
        return BudgetChoice(Choice.NO_INSURANCE, None, no_cover, 0.0, feasible=False)

    smallest, _ = invert_indemnity_premium(s.sev, s.freq, s.indemnity_pricing, budget)
    d: float = max(deductible_optimum(s).parameter, smallest)
    premium = indemnity_premium(s.sev, s.freq, s.indemnity_pricing, d)
    return _against_no_cover(
        Choice.INDEMNITY, d, mv_indemnity(s, d), premium, no_cover
    )


def delta_mv_budget(s: Scenario, budget: float) -> float:
    """Return MV^(p)_bud(budget) - MV^(d)_bud(budget)."""
    parametric = budget_constrained_parametric(s, budget)
    indemnity = budget_constrained_indemnity(s, budget)
    return parametric.mv - indemnity.mv


def budget_choice(
    parametric: BudgetChoice, indemnity: BudgetChoice, no_cover: float
) -> Choice:
    """Return the best of the three options, or `TIE` when the best coincide."""
    candidates: dict[Choice, float] = {Choice.NO_INSURANCE: no_cover}
    for option in (indemnity, parametric):
        if option.choice is not Choice.NO_INSURANCE:
            candidates[option.choice] = option.mv
    return _pick(candidates)


def affordability_points(s: Scenario) -> AffordabilityPoints:
    """Return P_d^min, the premium of d* and the premium of k*."""
    return AffordabilityPoints(
        minimum_indemnity_premium(s.indemnity_pricing),
        deductible_optimum(s).premium,
        parametric_optimum(s).premium,
    )


def indifference_budget(
    s: Scenario, low: float, high: float, steps: int
) -> float | None:
    """Return the budget where parametric stops being strictly better.

    The budget axis is swept and the first step where the difference passes
    from positive to non-positive is refined with `brentq`.

    Returns
    -------
        the indifference budget, or None if the sweep has no such crossing

    """
    budgets = np.linspace(low, high, steps)
    deltas = [delta_mv_budget(s, budget) for budget in budgets]
    for i in range(steps - 1):
        if deltas[i] > 0 >= deltas[i + 1]:
            return brentq(
                lambda budget: delta_mv_budget(s, budget),
                budgets[i],
                budgets[i + 1],
                xtol=GAMMA_XTOL,
                maxiter=ROOT_MAXITER,
            )
    return None


def surface(s: Scenario, grid: GridSpec, kind: SurfaceKind) -> list[SurfaceCell]:
    """Evaluate the MV difference of a surface kind on every grid cell.

    Cells are ordered row-major: the first axis varies slowest.

    Raises
    ------
        CoreValueError: if the grid axes do not match the kind.

    """
    expected = AXIS_NAMES[kind]
    if (grid.axis1_name, grid.axis2_name) != expected:
        raise CoreValueError(
            f"Surface {kind.value} needs axes {expected}, got "
            f"{(grid.axis1_name, grid.axis2_name)}."
        )

    cells: list[SurfaceCell] = []
    gammas = grid.axis2_values()
    for first in grid.axis1_values():
        first = float(first)
        if kind is SurfaceKind.BUDGET_P_GAMMA:
            row = _budget_row(s, first, gammas)
        elif kind is SurfaceKind.PREMIUM_MATCH_D_GAMMA:
            row = _matched_row(s, first, first, gammas)
        else:
            priced = s.with_indemnity(loading=first)
            d = deductible_optimum(priced).parameter
            row = _matched_row(priced, first, d, gammas)
        cells.extend(row)

    logging.debug("Evaluated %s cells of surface %s", len(cells), kind.value)
    return cells


def _matched_row(
    s: Scenario, first: float, d: float, gammas: np.ndarray
) -> list[SurfaceCell]:
    row: list[SurfaceCell] = []
    for gamma in gammas:
        priced = s.with_indemnity(fixed_cost=float(gamma))
        matched = premium_matched_k(priced, d)
        parametric = mv_parametric(priced, matched.k)
        indemnity = mv_indemnity(priced, d)
        chosen = _pick({Choice.INDEMNITY: indemnity, Choice.PARAMETRIC: parametric})
        row.append(
            SurfaceCell(
                first,
                float(gamma),
                parametric - indemnity,
                matched.capped,
                False,
                chosen,
            )
        )
    return row


def _budget_row(s: Scenario, budget: float, gammas: np.ndarray) -> list[SurfaceCell]:
    row: list[SurfaceCell] = []
    parametric = budget_constrained_parametric(s, budget)
    capped: bool = (
        parametric.choice is Choice.PARAMETRIC and parametric.parameter == s.sev.cap
    )
    no_cover = mv_no_insurance(s)
    for gamma in gammas:
        priced = s.with_indemnity(fixed_cost=float(gamma))
        indemnity = budget_constrained_indemnity(priced, budget)
        chosen = budget_choice(parametric, indemnity, no_cover)
        row.append(
            SurfaceCell(
                budget,
                float(gamma),
                parametric.mv - indemnity.mv,
                capped,
                not indemnity.feasible,
                chosen,
            )
        )
    return row


def _find_root(
    func: Callable[[float], float], low: float, high: float, xtol: float
) -> tuple[float, int]:
    """Return the first root of `func` on [low, high] and the iterations used.

    The bracket is scanned on SCAN_POINTS points for the first sign change,
    which is then refined with `brentq`.

    Raises
    ------
        NoRootError: if no sign change is found.

    """
    points = np.linspace(low, high, SCAN_POINTS)
    values = [func(float(x)) for x in points]
    for i in range(SCAN_POINTS - 1):
        if values[i] == 0:
            return float(points[i]), 0
        if values[i] * values[i + 1] < 0:
            root, result = brentq(
                func,
                points[i],
                points[i + 1],
                xtol=xtol,
                maxiter=ROOT_MAXITER,
                full_output=True,
            )
            logging.debug("Root %s after %s iterations", root, result.iterations)
            return root, result.iterations
    if values[-1] == 0:
        return float(points[-1]), 0

    raise NoRootError(f"No sign change of the MV difference on [{low}, {high}].")


def _against_no_cover(
    choice: Choice, parameter: float, mv: float, premium: float, no_cover: float
) -> BudgetChoice:
    if is_tie(mv, no_cover):
        return BudgetChoice(Choice.NO_INSURANCE, None, no_cover, 0.0, tie=True)
    if mv > no_cover:
        return BudgetChoice(choice, parameter, mv, premium)
    return BudgetChoice(Choice.NO_INSURANCE, None, no_cover, 0.0)


def _pick(candidates: dict[Choice, float]) -> Choice:
    """Return the option with the highest value, or `TIE` if it is not unique."""
    best: float = max(candidates.values())
    winners = [choice for choice, value in candidates.items() if is_tie(value, best)]
    return winners[0] if len(winners) == 1 else Choice.TIE


def _check_budget(budget: float) -> None:
    if not (np.isfinite(budget) and budget >= 0):
        raise CoreValueError(f"Budget {budget} must be non-negative and finite.")
