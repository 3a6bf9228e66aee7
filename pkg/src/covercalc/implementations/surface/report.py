from typing import override

import pandas as pd

from covercalc.core.cli.type_parsers import Sweep
from covercalc.core.comparison import (
    AXIS_NAMES,
    Choice,
    GridSpec,
    SurfaceKind,
    surface,
)
from covercalc.core.report import Report, to_csv
from covercalc.implementations.surface import static

COLUMNS: tuple[str, ...] = (
    "axis1",
    "axis2",
    "delta_mv",
    "capped",
    "indemnity_infeasible",
    "chosen",
)


class SurfaceReport(Report):
    """MV^(p) - MV^(d) on every cell of a grid.

    Without `--out` the CSV table is the whole output; with it, the table goes
    to the file and a summary of the cells is printed.
    """

    STATIC: str = static

    def __init__(
        self,
        *,
        kind: SurfaceKind,
        grid: tuple[Sweep, Sweep] | None = None,
        truncate_zero: bool = False,
        **kwargs,
    ) -> None:
        """Initialize with the surface kind, the optional grid and truncation."""
        super().__init__(**kwargs)
        self._kind: SurfaceKind = kind
        self._grid: tuple[Sweep, Sweep] | None = grid
        self.kind: str = kind.value
        self.truncate_zero: bool = truncate_zero

    @override
    def update(self) -> None:
        super().update()
        spec = self._grid_spec()
        cells = surface(self._scenario, spec, self._kind)

        self.axis1_name, self.axis2_name = spec.axis1_name, spec.axis2_name
        self.cells = len(cells)
        self._table = pd.DataFrame(
            {
                "axis1": [cell.axis1_value for cell in cells],
                "axis2": [cell.axis2_value for cell in cells],
                "delta_mv": [cell.delta_mv for cell in cells],
                "capped": [cell.capped for cell in cells],
                "indemnity_infeasible": [cell.indemnity_infeasible for cell in cells],
                "chosen": [cell.chosen.value for cell in cells],
            },
            columns=list(COLUMNS),
        )
        if self.truncate_zero:
            self._table["delta_mv"] = self._table["delta_mv"].clip(lower=0.0)

        counts = self._table["chosen"].value_counts()
        self.parametric_cells = int(counts.get(Choice.PARAMETRIC.value, 0))
        self.indemnity_cells = int(counts.get(Choice.INDEMNITY.value, 0))
        self.no_insurance_cells = int(counts.get(Choice.NO_INSURANCE.value, 0))
        self.tie_cells = int(counts.get(Choice.TIE.value, 0))
        self.capped_cells = int(self._table["capped"].sum())
        self.out = self._out or "-"

    @override
    def table(self) -> pd.DataFrame:
        return self._table

    @override
    def csv(self) -> str:
        currency = ("axis2", "delta_mv")
        if self._kind is not SurfaceKind.PREMIUM_MATCH_THETA_GAMMA:
            currency = ("axis1", *currency)
        return to_csv(self._table, currency)

    @override
    def summarize(self) -> str:
        if self._out is None:
            return self.csv().rstrip("\n")
        return super().summarize()

    @property
    def rows(self) -> pd.DataFrame:
        """Return the cells; part of the JSON export."""
        return self._table

    def _grid_spec(self) -> GridSpec:
        """Return the grid of the flag, or the default grid of the kind."""
        if self._grid is None:
            return GridSpec.default(self._kind, self._scenario)
        first, second = self._grid
        name1, name2 = AXIS_NAMES[self._kind]
        return GridSpec(name1, *first, name2, *second)
