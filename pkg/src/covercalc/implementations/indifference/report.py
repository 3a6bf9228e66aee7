from typing import override

from covercalc.core.comparison import (
    IndifferenceMode,
    indifference_gamma_d,
    indifference_theta_d,
)
from covercalc.core.report import Report
from covercalc.implementations.indifference import static


class IndifferenceReport(Report):
    """The root of MV^(p) - MV^(d) in gamma_d or theta_d."""

    STATIC: str = static

    def __init__(
        self,
        *,
        target: str = "gamma",
        mode: IndifferenceMode = IndifferenceMode.OPTIMAL_BOTH,
        **kwargs,
    ) -> None:
        """Initialize with the variable to solve for and the comparison mode."""
        super().__init__(**kwargs)
        self.target: str = target
        self.mode: str = mode.value
        self._mode: IndifferenceMode = mode

    @override
    def update(self) -> None:
        super().update()
        finder = (
            indifference_gamma_d if self.target == "gamma" else indifference_theta_d
        )
        result = finder(self._scenario, self._mode)

        self.variable = result.target
        self.root = result.root
        self.bracket_low, self.bracket_high = result.bracket
        self.iterations = result.iterations
        self.residual = result.residual
