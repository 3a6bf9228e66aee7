import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from covercalc.core.conversions import wealth2beta
from covercalc.core.exceptions import CoreValueError, NonMonotoneFOCError
from covercalc.core.pricing import (
    FrequencyModel,
    PricingParams,
    indemnity_premium,
    parametric_premium,
)
from covercalc.core.severity import SeverityModel, as_output

FOC_XTOL: float = 1e-6
FOC_MAXITER: int = 200
FOC_MONOTONE_POINTS: int = 257
TIE_RTOL: float = 1e-9


@dataclass(frozen=True)
class Preferences:
    """Mean-variance preferences MV = E[W] - beta * Var(W).

    Attributes
    ----------
        initial_wealth: float
            Initial wealth w0 in currency.
        risk_aversion: float
            beta in 1/currency.

    """

    initial_wealth: float
    risk_aversion: float

    def __post_init__(self) -> None:
        """Validate the parameters."""
        for name in ("initial_wealth", "risk_aversion"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise CoreValueError(
                    f"Invalid {name}: {value}. It must be positive and finite."
                )

    @classmethod
    def normalized(cls, initial_wealth: float) -> "Preferences":
        """Return preferences with beta = 1 / w0."""
        return cls(initial_wealth, wealth2beta(initial_wealth))

    @classmethod
    def risk_neutral(cls, initial_wealth: float) -> "Preferences":
        """Return preferences with beta = 0.

        Only meant for checks against simulation; the optimisation routines
        need beta > 0.
        """
        preferences = object.__new__(cls)
        object.__setattr__(preferences, "initial_wealth", initial_wealth)
        object.__setattr__(preferences, "risk_aversion", 0.0)
        return preferences


@dataclass(frozen=True)
class Scenario:
    """The full parameter tuple every computation works on."""

    prefs: Preferences
    sev: SeverityModel
    freq: FrequencyModel
    indemnity_pricing: PricingParams = field(default_factory=PricingParams)
    parametric_pricing: PricingParams = field(default_factory=PricingParams)

    @property
    def beta(self) -> float:
        """Return the risk aversion."""
        return self.prefs.risk_aversion

    def with_indemnity(self, **changes: float) -> "Scenario":
        """Return a copy with updated indemnity `loading` or `fixed_cost`."""
        return replace(
            self, indemnity_pricing=replace(self.indemnity_pricing, **changes)
        )

    def with_parametric(self, **changes: float) -> "Scenario":
        """Return a copy with updated parametric `loading` or `fixed_cost`."""
        return replace(
            self, parametric_pricing=replace(self.parametric_pricing, **changes)
        )


@dataclass(frozen=True)
class ContractOptimum:
    """The best contract parameter of one design.

    Attributes
    ----------
        parameter: float
            d* or k*, always in [0, L].
        clamped: bool
            Whether the interior formula was projected onto [0, L].
        premium: float
            The premium of the contract.
        mv_value: float
            Its mean-variance value.
        tie: bool
            Whether both boundaries gave the same value; the lower premium
            option is reported.

    """

    parameter: float
    clamped: bool
    premium: float
    mv_value: float
    tie: bool = False


@dataclass(frozen=True)
class DualityGap:
    """The gap d* + k* - E[Y] and the reasons the identity may not apply."""

    gap: float
    deductible: ContractOptimum
    payment: ContractOptimum
    violations: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        """Return whether all conditions of the identity are met."""
        return not self.violations


def is_tie(first: float, second: float) -> bool:
    """Return whether two values are equal up to a relative 1e-9."""
    return math.isclose(first, second, rel_tol=TIE_RTOL, abs_tol=0.0)


def mv_no_insurance(s: Scenario) -> float:
    """Return the mean-variance value without any cover.

    For Poisson counts: w0 - lambda E[Y] - beta lambda E[Y^2]; otherwise the
    random-sum variance mu Var(Y) + sigma_N^2 E[Y]^2 is used.
    """
    mean_count: float = s.freq.mean
    if s.freq.poisson_flag:
        risk = mean_count * s.sev.second_moment()
    else:
        risk = mean_count * s.sev.variance() + s.freq.variance * s.sev.mean() ** 2
    return s.prefs.initial_wealth - mean_count * s.sev.mean() - s.beta * risk


def mv_indemnity(s: Scenario, d: ArrayLike) -> np.ndarray | float:
    """Return the mean-variance value of the excess-of-loss contract.

    Arguments:
    ---------
        s: the scenario
        d: the deductible(s) in [0, L]

    Returns:
    -------
        w0 - P_d(d) - mu E[Y] + mu E[(Y - d)_+] - beta Var(sum min(Y_i, d))

    """
    sev, freq = s.sev, s.freq
    premium = np.asarray(indemnity_premium(sev, freq, s.indemnity_pricing, d))
    excess = np.asarray(sev.excess_mean(d))
    retained_square = np.asarray(sev.retained_second_moment(d))
    if freq.poisson_flag:
        risk = freq.mean * retained_square
    else:
        retained = np.asarray(sev.retained_mean(d))
        risk = (
            freq.mean * (retained_square - retained**2)
            + freq.variance * retained**2
        )
    value = (
        s.prefs.initial_wealth
        - premium
        - freq.mean * sev.mean()
        + freq.mean * excess
        - s.beta * risk
    )
    return as_output(value)


def mv_parametric(s: Scenario, k: ArrayLike) -> np.ndarray | float:
    """Return the mean-variance value of the parametric contract.

    Arguments:
    ---------
        s: the scenario
        k: the payment(s) per event in [0, L]

    Raises:
    ------
        CoreValueError: if a payment lies outside [0, L].

    Returns:
    -------
        w0 - P_p(k) - mu E[Y] + mu k - beta Var(S - k N)

    """
    sev, freq = s.sev, s.freq
    k = np.asarray(k, dtype=float)
    if np.any(k > sev.cap):
        raise CoreValueError(f"Payment per event {k} exceeds the cap {sev.cap}.")

    premium = np.asarray(parametric_premium(freq, s.parametric_pricing, k))
    mean_loss = sev.mean()
    if freq.poisson_flag:
        risk = freq.mean * (sev.second_moment() + k**2 - 2 * k * mean_loss)
    else:
        risk = freq.mean * sev.variance() + freq.variance * (mean_loss - k) ** 2
    value = (
        s.prefs.initial_wealth
        - premium
        - freq.mean * mean_loss
        + freq.mean * k
        - s.beta * risk
    )
    return as_output(value)


def mv_indemnity_derivative(s: Scenario, d: ArrayLike) -> np.ndarray | float:
    """Return dMV/dd = lambda exp(-nu d) (theta_d - 2 beta d) (Poisson counts)."""
    d = np.asarray(d, dtype=float)
    slope = s.indemnity_pricing.loading - 2 * s.beta * d
    return as_output(s.freq.mean * np.exp(-s.sev.nu * d) * slope)


def mv_indemnity_second_derivative(s: Scenario, d: ArrayLike) -> np.ndarray | float:
    """Return d2MV/dd2 = lambda exp(-nu d) (-nu theta_d + 2 nu beta d - 2 beta)."""
    d = np.asarray(d, dtype=float)
    nu, beta = s.sev.nu, s.beta
    curvature = -nu * s.indemnity_pricing.loading + 2 * nu * beta * d - 2 * beta
    return as_output(s.freq.mean * np.exp(-nu * d) * curvature)


def mv_parametric_derivative(s: Scenario, k: ArrayLike) -> np.ndarray | float:
    """Return dMV/dk = lambda (-theta_p + 2 beta (E[Y] - k)) (Poisson counts)."""
    k = np.asarray(k, dtype=float)
    slope = -s.parametric_pricing.loading + 2 * s.beta * (s.sev.mean() - k)
    return as_output(s.freq.mean * slope)


def mv_parametric_second_derivative(s: Scenario) -> float:
    """Return d2MV/dk2 = -2 beta lambda."""
    return -2 * s.beta * s.freq.mean


def optimal_deductible(s: Scenario) -> ContractOptimum:
    """Return d* = theta_d / (2 beta) projected onto [0, L].

    Raises
    ------
        CoreValueError: for non-Poisson counts, or when the curvature at an
            interior optimum is not negative.

    """
    _require_poisson(s, "optimal_deductible")
    interior: float = s.indemnity_pricing.loading / (2 * s.beta)
    d, clamped = _project(interior, s.sev.cap, "deductible")

    if not clamped:
        curvature = mv_indemnity_second_derivative(s, d)
        if curvature >= 0:
            raise CoreValueError(
                f"Second-order condition fails at d = {d}: {curvature}."
            )

    return _deductible_optimum(s, d, clamped)


def optimal_parametric(s: Scenario) -> ContractOptimum:
    """Return k* = E[Y] - theta_p / (2 beta) projected onto [0, L]."""
    _require_poisson(s, "optimal_parametric")
    interior: float = s.sev.mean() - s.parametric_pricing.loading / (2 * s.beta)
    k, clamped = _project(interior, s.sev.cap, "payment")
    return _parametric_optimum(s, k, clamped)


def general_parametric_optimum(s: Scenario) -> ContractOptimum:
    """Return k* = E[Y] - (mu / sigma_N^2) theta_p / (2 beta) projected onto [0, L].

    For Poisson counts this equals `optimal_parametric`.
    """
    ratio: float = s.freq.mean / s.freq.variance
    interior: float = s.sev.mean() - ratio * s.parametric_pricing.loading / (
        2 * s.beta
    )
    k, clamped = _project(interior, s.sev.cap, "payment")
    return _parametric_optimum(s, k, clamped)


def general_deductible_optimum(s: Scenario) -> ContractOptimum:
    """Return the deductible solving the general-count first-order condition.

    The condition reads mu theta_d = 2 beta (mu d + (sigma_N^2 - mu) E[min(Y, d)])
    and is solved on [0, L] with `brentq`. Without an interior root the
    boundary with the higher value is returned.

    Raises
    ------
        NonMonotoneFOCError: if the right-hand side is not increasing on
            [0, L].

    """
    mu, variance = s.freq.mean, s.freq.variance
    loading, beta = s.indemnity_pricing.loading, s.beta

    def foc(d: ArrayLike) -> np.ndarray | float:
        retained = np.asarray(s.sev.retained_mean(d))
        retained_risk = mu * np.asarray(d) + (variance - mu) * retained
        return as_output(2 * beta * retained_risk - mu * loading)

    grid = np.linspace(0.0, s.sev.cap, FOC_MONOTONE_POINTS)
    if np.any(np.diff(foc(grid)) <= 0):
        raise NonMonotoneFOCError(
            f"The deductible condition is not monotone for mean {mu} and "
            f"variance {variance}."
        )

    at_zero, at_cap = foc(0.0), foc(s.sev.cap)
    if at_zero >= 0:
        return _deductible_optimum(s, 0.0, False)
    if at_cap <= 0:
        return _best_boundary(s)

    d, result = brentq(
        foc, 0.0, s.sev.cap, xtol=FOC_XTOL, maxiter=FOC_MAXITER, full_output=True
    )
    logging.debug("Deductible condition solved in %s iterations", result.iterations)
    return _deductible_optimum(s, d, False)


def deductible_optimum(s: Scenario) -> ContractOptimum:
    """Return the optimal deductible for any count model."""
    if s.freq.poisson_flag:
        return optimal_deductible(s)
    return general_deductible_optimum(s)


def parametric_optimum(s: Scenario) -> ContractOptimum:
    """Return the optimal parametric payment for any count model."""
    if s.freq.poisson_flag:
        return optimal_parametric(s)
    return general_parametric_optimum(s)


def duality_gap(s: Scenario) -> DualityGap:
    """Return d* + k* - E[Y] with the list of unmet conditions.

    The gap vanishes for Poisson counts, equal loadings and interior optima.
    When a condition fails the gap is still reported and the failures are
    listed, not raised.
    """
    deductible = deductible_optimum(s)
    payment = parametric_optimum(s)
    gap: float = deductible.parameter + payment.parameter - s.sev.mean()

    violations: list[str] = []
    if s.indemnity_pricing.loading != s.parametric_pricing.loading:
        violations.append("loadings differ")
    if not s.freq.poisson_flag:
        violations.append("counts are not Poisson")
    if deductible.clamped or payment.clamped:
        violations.append("an optimum is on the boundary")

    if violations:
        logging.warning("Duality conditions not met: %s", ", ".join(violations))

    return DualityGap(gap, deductible, payment, tuple(violations))


def _require_poisson(s: Scenario, name: str) -> None:
    if not s.freq.poisson_flag:
        raise CoreValueError(
            f"{name} needs Poisson counts; use the general-count optimum."
        )


def _project(value: float, cap: float, name: str) -> tuple[float, bool]:
    """Return `value` projected onto [0, cap] and whether it moved."""
    projected: float = min(max(value, 0.0), cap)
    clamped: bool = projected != value
    if clamped:
        logging.warning(
            "Optimal %s %s projected onto [0, %s]: %s", name, value, cap, projected
        )
    return projected, clamped


def _deductible_optimum(s: Scenario, d: float, clamped: bool) -> ContractOptimum:
    premium = indemnity_premium(s.sev, s.freq, s.indemnity_pricing, d)
    return ContractOptimum(d, clamped, premium, mv_indemnity(s, d))


def _parametric_optimum(s: Scenario, k: float, clamped: bool) -> ContractOptimum:
    premium = parametric_premium(s.freq, s.parametric_pricing, k)
    return ContractOptimum(k, clamped, premium, mv_parametric(s, k))


def _best_boundary(s: Scenario) -> ContractOptimum:
    """Return the better of d = 0 and d = L; ties go to d = L (lower premium)."""
    full, none = mv_indemnity(s, 0.0), mv_indemnity(s, s.sev.cap)
    tie: bool = is_tie(full, none)
    d: float = s.sev.cap if tie or none > full else 0.0
    return replace(_deductible_optimum(s, d, True), tie=tie)
