import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from covercalc.core.exceptions import CoreValueError, InfeasibleError
from covercalc.core.severity import SeverityModel, as_output

BISECTION_XTOL: float = 1e-9


class CountFamily(Enum):
    """Named laws for the number of events per period.

    `MOMENTS` means only the mean and variance are known; such counts can be
    priced and optimised but not simulated.
    """

    POISSON = "poisson"
    NEGATIVE_BINOMIAL = "negative_binomial"
    MOMENTS = "moments"


@dataclass(frozen=True)
class FrequencyModel:
    """Law of the event count N through its mean and variance.

    Attributes
    ----------
        mean: float
            E[N], events per period.
        variance: float
            Var(N), events^2 per period.
        family: CountFamily
            The named law; Poisson counts have variance equal to the mean.

    """

    mean: float
    variance: float
    family: CountFamily = CountFamily.POISSON

    def __post_init__(self) -> None:
        """Validate the parameters."""
        for name in ("mean", "variance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise CoreValueError(
                    f"Invalid count {name}: {value}. It must be positive and "
                    "finite."
                )

        if self.family is CountFamily.POISSON and self.variance != self.mean:
            raise CoreValueError(
                f"Poisson counts need variance == mean, got {self.variance} "
                f"and {self.mean}."
            )

        if (
            self.family is CountFamily.NEGATIVE_BINOMIAL
            and self.variance <= self.mean
        ):
            raise CoreValueError(
                "Negative binomial counts need variance > mean, got "
                f"{self.variance} and {self.mean}."
            )

    @classmethod
    def poisson(cls, rate: float) -> "FrequencyModel":
        """Return Poisson counts with mean and variance `rate`."""
        return cls(mean=rate, variance=rate, family=CountFamily.POISSON)

    @classmethod
    def general(
        cls, mean: float, variance: float, family: CountFamily | None = None
    ) -> "FrequencyModel":
        """Return counts with the given mean and variance.

        Without an explicit `family`, equi-dispersed counts are Poisson,
        overdispersed counts are negative binomial and underdispersed counts
        are known through their moments only.

        Arguments:
        ---------
            mean: E[N]
            variance: Var(N)
            family: the named count law (default: inferred)

        Returns:
        -------
            the frequency model

        """
        if family is None:
            if variance == mean:
                family = CountFamily.POISSON
            elif variance > mean:
                family = CountFamily.NEGATIVE_BINOMIAL
            else:
                family = CountFamily.MOMENTS
        return cls(mean=mean, variance=variance, family=family)

    @property
    def poisson_flag(self) -> bool:
        """Return whether the counts are Poisson (variance == mean)."""
        return self.family is CountFamily.POISSON


@dataclass(frozen=True)
class PricingParams:
    """Expectation-principle pricing: premium = (1 + loading)(E[B] + fixed_cost).

    Attributes
    ----------
        loading: float
            Proportional loading theta (dimensionless).
        fixed_cost: float
            Additive cost gamma per period in currency. It is loaded as well.

    """

    loading: float = 0.0
    fixed_cost: float = 0.0

    def __post_init__(self) -> None:
        """Validate the parameters."""
        for name in ("loading", "fixed_cost"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise CoreValueError(
                    f"Invalid {name}: {value}. It must be non-negative and "
                    "finite."
                )

    @property
    def premium_floor(self) -> float:
        """Return (1 + theta) * gamma, the premium of a contract paying nothing."""
        return (1 + self.loading) * self.fixed_cost


def indemnity_premium(
    sev: SeverityModel, freq: FrequencyModel, pp: PricingParams, d: ArrayLike
) -> np.ndarray | float:
    """Return the premium of the excess-of-loss contract with deductible `d`.

    Arguments:
    ---------
        sev: the severity model
        freq: the count model; only its mean enters the premium
        pp: the indemnity pricing parameters
        d: the deductible(s) in [0, L]

    Returns:
    -------
        (1 + theta_d) * (E[N] * E[(Y - d)_+] + gamma_d)

    """
    expected_benefit = freq.mean * np.asarray(sev.excess_mean(d))
    return as_output((1 + pp.loading) * (expected_benefit + pp.fixed_cost))


def parametric_premium(
    freq: FrequencyModel, pp: PricingParams, k: ArrayLike
) -> np.ndarray | float:
    """Return the premium of the parametric contract paying `k` per event.

    Arguments:
    ---------
        freq: the count model; only its mean enters the premium
        pp: the parametric pricing parameters
        k: the payment(s) per event, non-negative

    Raises:
    ------
        CoreValueError: if a payment is negative.

    Returns:
    -------
        (1 + theta_p) * (E[N] * k + gamma_p)

    """
    k = np.asarray(k, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(k < 0):
        raise CoreValueError(f"Payment per event {k} must be non-negative.")
    return as_output((1 + pp.loading) * (freq.mean * k + pp.fixed_cost))


def minimum_indemnity_premium(pp: PricingParams) -> float:
    """Return P_d^min = (1 + theta_d) gamma_d, the premium at deductible L."""
    return pp.premium_floor


def invert_indemnity_premium(
    sev: SeverityModel,
    freq: FrequencyModel,
    pp: PricingParams,
    target: float,
    method: str = "closed_form",
) -> tuple[float, bool]:
    """Return the deductible whose indemnity premium equals `target`.

    The premium decreases strictly in the deductible, from the full cover
    premium at d = 0 to the floor (1 + theta_d) gamma_d at d = L. Targets
    above the full cover premium return d = 0 with the clamped flag set.

    Arguments:
    ---------
        sev: the severity model
        freq: the count model
        pp: the indemnity pricing parameters
        target: the premium to match
        method: `closed_form` (default) or `bisection`

    Raises:
    ------
        InfeasibleError: if the target is below (1 + theta_d) gamma_d.

    Returns:
    -------
        the pair (deductible, clamped)

    """
    floor: float = pp.premium_floor
    if target < floor:
        raise InfeasibleError(
            f"Premium {target} is below the indemnity floor {floor}."
        )
    if target == floor:
        return sev.cap, False

    full_cover: float = indemnity_premium(sev, freq, pp, 0.0)
    if target >= full_cover:
        clamped: bool = target > full_cover
        if clamped:
            logging.info(
                "Premium %s exceeds the full cover premium %s; d = 0.",
                target,
                full_cover,
            )
        return 0.0, clamped

    if method == "closed_form":
        expected_benefit = (target / (1 + pp.loading) - pp.fixed_cost) / freq.mean
        d = -math.log(sev.nu * expected_benefit + sev.atom_mass) / sev.nu
    elif method == "bisection":
        d = brentq(
            lambda x: indemnity_premium(sev, freq, pp, x) - target,
            0.0,
            sev.cap,
            xtol=BISECTION_XTOL,
        )
    else:
        raise CoreValueError(f"Unknown inversion method: {method}")

    return min(max(d, 0.0), sev.cap), False


def invert_parametric_premium(
    freq: FrequencyModel, pp: PricingParams, target: float
) -> float:
    """Return the payment per event whose parametric premium equals `target`.

    The result is not capped at L; that is left to the caller.

    Arguments:
    ---------
        freq: the count model
        pp: the parametric pricing parameters
        target: the premium to match

    Raises:
    ------
        InfeasibleError: if the target is below (1 + theta_p) gamma_p.

    Returns:
    -------
        k = (target / (1 + theta_p) - gamma_p) / E[N]

    """
    floor: float = pp.premium_floor
    if target < floor:
        raise InfeasibleError(
            f"Premium {target} is below the parametric floor {floor}."
        )
    if target == floor:
        return 0.0
    return max((target / (1 + pp.loading) - pp.fixed_cost) / freq.mean, 0.0)
