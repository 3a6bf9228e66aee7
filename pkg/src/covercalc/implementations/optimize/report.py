from typing import override

from covercalc.core.comparison import BudgetChoice, Choice, budget_choice
from covercalc.core.objective import duality_gap
from covercalc.core.oracle import DesignKind, grid_search_optimum
from covercalc.core.report import Report
from covercalc.implementations.optimize import static


class OptimizeReport(Report):
    """Optimal contracts of both designs.

    Attributes
    ----------
        deductible: float
            d*, projected onto [0, L].
        payment: float
            k*, projected onto [0, L].
        duality_gap: float
            d* + k* - E[Y]; 0 under Poisson counts and equal loadings.
        duality_violations: str
            The conditions of the identity that are not met.
        preferred: str
            The option with the highest mean-variance value.
        grid_deductible, grid_payment: float | None
            Grid-search optima when `check_points` is set.

    """

    STATIC: str = static

    def __init__(self, *, check_points: int = 0, **kwargs) -> None:
        """Initialize with the number of grid-search points (0 for none)."""
        super().__init__(**kwargs)
        self.check_points: int = check_points

    @override
    def update(self) -> None:
        super().update()
        s = self._scenario
        gap = duality_gap(s)
        deductible, payment = gap.deductible, gap.payment

        self.deductible = deductible.parameter
        self.deductible_clamped = deductible.clamped
        self.deductible_tie = deductible.tie
        self.indemnity_premium = deductible.premium
        self.mv_indemnity = deductible.mv_value

        self.payment = payment.parameter
        self.payment_clamped = payment.clamped
        self.parametric_premium = payment.premium
        self.mv_parametric = payment.mv_value

        self.duality_gap = gap.gap
        self.duality_holds = gap.holds
        self.duality_violations = "; ".join(gap.violations) or "none"
        self.mv_gap_optimal = self.mv_parametric - self.mv_indemnity
        self.preferred = budget_choice(
            BudgetChoice(Choice.PARAMETRIC, self.payment, self.mv_parametric, 0.0),
            BudgetChoice(Choice.INDEMNITY, self.deductible, self.mv_indemnity, 0.0),
            self.mv_none,
        ).value

        self.grid_deductible = self.grid_payment = None
        if self.check_points:
            self.grid_deductible = grid_search_optimum(
                s, DesignKind.INDEMNITY, self.check_points
            )
            self.grid_payment = grid_search_optimum(
                s, DesignKind.PARAMETRIC, self.check_points
            )

    @override
    def template_fields(self) -> dict:
        fields = super().template_fields()
        fields["grid_check"] = (
            f"Grid search on {self.check_points} points: d = "
            f"{self.grid_deductible:,.2f}, k = {self.grid_payment:,.2f}\n"
            if self.check_points
            else ""
        )
        return fields
