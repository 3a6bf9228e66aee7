from typing import override

from covercalc.core.objective import mv_indemnity, mv_no_insurance, mv_parametric
from covercalc.core.oracle import (
    Design,
    DesignKind,
    SimulationConfig,
    premium,
    simulate_wealth,
)
from covercalc.core.report import Report
from covercalc.implementations.simulate import static


class SimulateReport(Report):
    """Monte Carlo estimate of one contract next to its closed form."""

    STATIC: str = static

    def __init__(
        self,
        *,
        design: Design,
        years: int = 1_000_000,
        seed: int = 0,
        antithetic: bool = False,
        workers: int = 1,
        **kwargs,
    ) -> None:
        """Initialize with the contract and the simulation settings."""
        super().__init__(**kwargs)
        self._design: Design = design
        self._config = SimulationConfig(years, seed, antithetic, workers)
        self.design: str = design.kind.value
        self.parameter: float = design.parameter
        self.years: int = years
        self.seed: int = seed
        self.antithetic: bool = antithetic

    @override
    def update(self) -> None:
        super().update()
        s = self._scenario
        estimate = simulate_wealth(s, self._design, self._config)

        self.premium = premium(s, self._design)
        self.draws = estimate.num_draws
        self.mean = estimate.mean
        self.variance = estimate.variance
        self.mv = estimate.mv
        self.std_error_mean = estimate.std_error_mean
        self.std_error_mv = estimate.std_error_mv
        self.closed_form_mv = self._closed_form()
        self.z_score = estimate.z_score(self.closed_form_mv)

    def _closed_form(self) -> float:
        kind = self._design.kind
        if kind is DesignKind.INDEMNITY:
            return mv_indemnity(self._scenario, self._design.parameter)
        if kind is DesignKind.PARAMETRIC:
            return mv_parametric(self._scenario, self._design.parameter)
        return mv_no_insurance(self._scenario)

    @override
    def template_fields(self) -> dict:
        fields = super().template_fields()
        fields["z_text"] = "n/a" if self.z_score is None else f"{self.z_score:.3f}"
        return fields
