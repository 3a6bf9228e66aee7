import math
from typing import override

import numpy as np
import pandas as pd

from covercalc.core.cli.type_parsers import Sweep
from covercalc.core.comparison import (
    BudgetChoice,
    affordability_points,
    budget_choice,
    budget_constrained_indemnity,
    budget_constrained_parametric,
    indifference_budget,
)
from covercalc.core.exceptions import CoreValueError
from covercalc.core.objective import Scenario, mv_no_insurance
from covercalc.core.report import Report, to_csv
from covercalc.implementations.budget import static


class BudgetReport(Report):
    """Budget-constrained choice between the designs.

    With `--budget` a single budget is reported. With `--sweep` every budget
    of the range becomes a row of a CSV table, and the affordability points
    and the budget where parametric cover stops being strictly better are
    reported as well.

    Attributes
    ----------
        budget: float | None
            The single budget.
        chosen: str
            The option held at the single budget.
        min_indemnity_premium: float
            P_d^min = (1 + theta_d) gamma_d, below which indemnity is
            infeasible.
        optimal_indemnity_premium, optimal_parametric_premium: float
            Budgets from which d* and k* are affordable.
        indifference_budget: float | None
            The sweep budget where MV^(p)_bud - MV^(d)_bud turns non-positive.

    """

    STATIC: str = static
    CURRENCY_COLUMNS: tuple[str, ...] = (
        "budget",
        "parametric_payment",
        "parametric_spent",
        "mv_parametric",
        "indemnity_deductible",
        "indemnity_spent",
        "mv_indemnity",
        "mv_none",
        "delta_mv",
    )

    def __init__(
        self,
        *,
        budget: float | None = None,
        sweep: Sweep | None = None,
        **kwargs,
    ) -> None:
        """Initialize with either a single budget or a sweep."""
        super().__init__(**kwargs)
        if (budget is None) == (sweep is None):
            raise CoreValueError("Give either a budget or a sweep.")
        self.budget: float | None = budget
        self._sweep: Sweep | None = sweep
        self._table: pd.DataFrame | None = None

    @override
    def update(self) -> None:
        super().update()
        s = self._scenario
        points = affordability_points(s)
        self.min_indemnity_premium = points.minimum_indemnity
        self.optimal_indemnity_premium = points.optimal_indemnity
        self.optimal_parametric_premium = points.optimal_parametric

        if self._sweep is None:
            for key, value in _row(s, self.budget).items():
                setattr(self, key, value)
            return

        self.sweep_min, self.sweep_max, self.sweep_steps = self._sweep
        budgets = np.linspace(*self._sweep)
        self._table = pd.DataFrame([_row(s, float(budget)) for budget in budgets])
        self.indifference_budget = indifference_budget(s, *self._sweep)

    @override
    def table(self) -> pd.DataFrame | None:
        return self._table

    @property
    def rows(self) -> pd.DataFrame | None:
        """Return the sweep table; part of the JSON export."""
        return self._table

    @override
    def summarize(self) -> str:
        summary = super().summarize()
        if self._table is None or self._out is not None:
            return summary
        return summary + "\n" + to_csv(self._table, self.CURRENCY_COLUMNS).rstrip("\n")

    @override
    def template_fields(self) -> dict:
        fields = super().template_fields()
        if self._table is None:
            fields["details"] = _single_text(fields)
        else:
            fields["details"] = _sweep_text(fields)
        return fields


def _row(s: Scenario, budget: float) -> dict:
    """Return the three options at one budget."""
    parametric: BudgetChoice = budget_constrained_parametric(s, budget)
    indemnity: BudgetChoice = budget_constrained_indemnity(s, budget)
    no_cover: float = mv_no_insurance(s)
    return {
        "budget": budget,
        "chosen": budget_choice(parametric, indemnity, no_cover).value,
        "parametric_payment": _parameter(parametric),
        "parametric_spent": parametric.spent,
        "mv_parametric": parametric.mv,
        "indemnity_deductible": _parameter(indemnity),
        "indemnity_spent": indemnity.spent,
        "indemnity_feasible": indemnity.feasible,
        "mv_indemnity": indemnity.mv,
        "mv_none": no_cover,
        "delta_mv": parametric.mv - indemnity.mv,
    }


def _parameter(option: BudgetChoice) -> float:
    return math.nan if option.parameter is None else option.parameter


def _amount(value: float | None) -> str:
    return "-" if value is None or math.isnan(value) else f"{value:,.2f}"


def _single_text(fields: dict) -> str:
    return (
        f"Budget:                          {fields['budget']:>16,.2f}\n"
        f"Chosen:                          {fields['chosen']:>16}\n"
        f"Parametric payment k:            "
        f"{_amount(fields['parametric_payment']):>16}\n"
        f"Parametric premium spent:        {fields['parametric_spent']:>16,.2f}\n"
        f"MV parametric:                   {fields['mv_parametric']:>16,.2f}\n"
        f"Indemnity deductible d:          "
        f"{_amount(fields['indemnity_deductible']):>16}\n"
        f"Indemnity premium spent:         {fields['indemnity_spent']:>16,.2f}\n"
        f"Indemnity feasible:              {fields['indemnity_feasible']!s:>16}\n"
        f"MV indemnity:                    {fields['mv_indemnity']:>16,.2f}\n"
        f"MV^(p)_bud - MV^(d)_bud:         {fields['delta_mv']:>16,.2f}\n"
    )


def _sweep_text(fields: dict) -> str:
    return (
        f"Budgets:                         {fields['sweep_min']:,.2f} to "
        f"{fields['sweep_max']:,.2f} in {fields['sweep_steps']} steps\n"
        f"Parametric stops being better:   "
        f"{_amount(fields['indifference_budget']):>16}\n"
    )
