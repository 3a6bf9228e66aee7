import numpy as np
import pytest

from covercalc.core.objective import Preferences, Scenario
from covercalc.core.pricing import FrequencyModel, PricingParams
from covercalc.core.scenario_file import baseline
from covercalc.core.severity import SeverityModel


@pytest.fixture
def scenario() -> Scenario:
    """The built-in calibration."""
    return baseline()


@pytest.fixture
def budget_scenario(scenario: Scenario) -> Scenario:
    """The calibration with an indemnity fixed cost of 1,000."""
    return scenario.with_indemnity(fixed_cost=1_000.0)


@pytest.fixture
def overdispersed(scenario: Scenario) -> Scenario:
    """The calibration with negative binomial counts, variance twice the mean."""
    mean = scenario.freq.mean
    return Scenario(
        scenario.prefs,
        scenario.sev,
        FrequencyModel.general(mean, 2 * mean),
        scenario.indemnity_pricing,
        scenario.parametric_pricing,
    )


def random_scenario(
    rng: np.random.Generator, dispersion: float = 1.0, interior: bool = True
) -> Scenario:
    """Draw a scenario with equal loadings and, if asked, interior optima."""
    while True:
        initial_wealth = rng.uniform(50_000, 500_000)
        cap = rng.uniform(200_000, 1_000_000)
        sev = SeverityModel.from_mean(rng.uniform(0.2, 2.0) * cap, cap)
        rate = rng.uniform(0.005, 0.2)
        freq = (
            FrequencyModel.poisson(rate)
            if dispersion == 1.0
            else FrequencyModel.general(rate, dispersion * rate)
        )
        pricing = PricingParams(rng.uniform(0.05, 0.5), 0.0)
        prefs = Preferences.normalized(initial_wealth)
        s = Scenario(prefs, sev, freq, pricing, pricing)

        half_width = pricing.loading * initial_wealth / 2
        if not interior or (sev.mean() > half_width and half_width < cap):
            return s


@pytest.fixture
def poisson_scenarios() -> list[Scenario]:
    """100 random Poisson scenarios with equal loadings and interior optima."""
    rng = np.random.default_rng(20240601)
    return [random_scenario(rng) for _ in range(100)]


@pytest.fixture
def general_scenarios() -> list[Scenario]:
    """20 random negative binomial scenarios with variance twice the mean."""
    rng = np.random.default_rng(20240602)
    return [random_scenario(rng, dispersion=2.0) for _ in range(20)]
