import json
import math
from enum import Enum
from os.path import join
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from covercalc.core import static
from covercalc.core.conversions import nu2mean
from covercalc.core.objective import Scenario, mv_no_insurance

CURRENCY_DECIMALS: int = 2
RATIO_DECIMALS: int = 6


class Report:
    """
    Based on the scenario, a set of results is calculated when the `update`
    method is called. The results can be summarized as a string or as a JSON
    string.

    Attributes
    ----------
        w0: float
            Initial wealth.
        beta: float
            Risk aversion in 1/currency.
        nu: float
            Rate of the uncapped exponential loss.
        mean_full_exponential: float
            Mean 1/nu of the uncapped loss.
        cap: float
            Sum at risk L.
        count_mean: float
            Expected number of events per period.
        count_variance: float
            Variance of the number of events per period.
        count_family: str
            Named law of the counts.
        theta_d, gamma_d, theta_p, gamma_p: float
            Loadings and fixed costs of both designs.
        mean_loss: float
            E[Y].
        atom_mass: float
            Probability of a complete write-off.
        mv_none: float
            Mean-variance value without cover.

    """

    TEMPLATE: str = "results.template"
    STATIC: str = static
    CURRENCY_COLUMNS: tuple[str, ...] = ()

    mean_loss: float
    atom_mass: float
    mv_none: float

    def __init__(self, *, scenario: Scenario, out: str | None = None, **_) -> None:
        """
        Initialize.

        Args:
            scenario: the model parameters
            out: the file the output is also written to

        """
        self._scenario: Scenario = scenario
        self._out: str | None = out

        self.w0: float = scenario.prefs.initial_wealth
        self.beta: float = scenario.beta
        self.nu: float = scenario.sev.nu
        self.mean_full_exponential: float = nu2mean(scenario.sev.nu)
        self.cap: float = scenario.sev.cap
        self.count_mean: float = scenario.freq.mean
        self.count_variance: float = scenario.freq.variance
        self.count_family: str = scenario.freq.family.value
        self.theta_d: float = scenario.indemnity_pricing.loading
        self.gamma_d: float = scenario.indemnity_pricing.fixed_cost
        self.theta_p: float = scenario.parametric_pricing.loading
        self.gamma_p: float = scenario.parametric_pricing.fixed_cost

    def update(self) -> None:
        """Set the results that follow from the scenario."""
        self.mean_loss = self._scenario.sev.mean()
        self.atom_mass = self._scenario.sev.atom_mass
        self.mv_none = mv_no_insurance(self._scenario)

    def as_dict(self, exclude: tuple[str, ...] = tuple()) -> dict:
        """
        Return the inputs and results as a dictionary.

        Returns
        -------
            the inputs and results as a dictionary

        """
        return {
            key: getattr(self, key)
            for key in dir(self)
            if key not in exclude
            and not key.startswith("_")
            and not key.isupper()
            and not callable(getattr(self, key))
        }

    def summarize(self) -> str:
        """
        Return the scenario followed by the results of the command.

        Returns
        -------
            the rendered templates

        """
        fields: dict[str, Any] = self.template_fields()
        with open(join(static, "inputs.template")) as inputs_file:
            txt: str = inputs_file.read().format(**fields)
        with open(join(self.STATIC, self.TEMPLATE)) as results_file:
            return txt + results_file.read().format(**fields)

    def template_fields(self) -> dict[str, Any]:
        """Return the values the templates are formatted with."""
        return self.as_dict()

    def json(self, indent: int = 4, **kwargs: Any) -> str:
        """
        Return the inputs and results as a JSON string.

        Returns
        -------
            the object as a JSON string; NaN and infinite values become null

        """
        return json.dumps(
            _finite(self.as_dict()),
            indent=indent,
            default=_serialize,
            allow_nan=False,
            **kwargs,
        )

    def table(self) -> pd.DataFrame | None:
        """Return the table of the command, if it has one."""
        return None

    def csv(self) -> str:
        """Return the table as CSV text with currency columns in cents."""
        return to_csv(self.table(), self.CURRENCY_COLUMNS)

    def write(self, text: str) -> None:
        """Write the table, or else `text`, to the `out` file."""
        if self._out is None:
            return
        table = self.table()
        if table is None:
            Path(self._out).write_text(text + "\n", encoding="utf-8")
        else:
            Path(self._out).write_text(self.csv(), encoding="utf-8")


def to_csv(table: pd.DataFrame, currency: tuple[str, ...] = ()) -> str:
    """Return `table` as CSV text.

    Columns named in `currency` are rounded to cents and other float columns
    to 6 decimals. Booleans are written as true/false.
    """
    formatted = table.copy()
    for column in formatted.columns:
        values = formatted[column]
        if values.dtype == bool:
            formatted[column] = values.map({True: "true", False: "false"})
        elif np.issubdtype(values.dtype, np.floating):
            decimals = CURRENCY_DECIMALS if column in currency else RATIO_DECIMALS
            formatted[column] = values.map(
                lambda x, n=decimals: "" if np.isnan(x) else f"{x:.{n}f}"
            )
    return formatted.to_csv(index=False, lineterminator="\n")


def _serialize(value: Any) -> Any:
    """Return a JSON-friendly form of enums, numpy values and tables."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return _finite(value.item())
    if isinstance(value, np.ndarray):
        return _finite(value.tolist())
    if isinstance(value, pd.DataFrame):
        return _finite(value.to_dict(orient="records"))
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def _finite(value: Any) -> Any:
    """Return `value` with NaN and infinite floats replaced by None."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value
