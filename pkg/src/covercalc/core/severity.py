import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gammainc

from covercalc.core.conversions import mean2nu
from covercalc.core.exceptions import CoreValueError


def _incomplete(x: ArrayLike) -> np.ndarray | float:
    """Return 1 - exp(-x)(1 + x), accurate for small `x`."""
    return gammainc(2, x)


@dataclass(frozen=True)
class SeverityModel:
    """Censored exponential severity Y = min(Z, L) with Z ~ Exp(nu).

    The law has density nu * exp(-nu * y) on [0, L) and an atom of mass
    exp(-nu * L) at the cap L (a complete write-off). Every moment is available
    in closed form; all methods that take a deductible also accept a numpy
    array of deductibles.

    Attributes
    ----------
        nu: float
            Exponential rate per currency unit.
        cap: float
            Sum at risk L in currency.

    """

    nu: float
    cap: float

    def __post_init__(self) -> None:
        """Validate the parameters."""
        for name in ("nu", "cap"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise CoreValueError(
                    f"Invalid {name}: {value}. It must be positive and finite."
                )

        if not 0 < self.atom_mass < 1:
            raise CoreValueError(
                f"Atom mass exp(-nu * L) = {self.atom_mass} is not in (0, 1)."
            )

    @classmethod
    def from_mean(cls, mean_full_exponential: float, cap: float) -> "SeverityModel":
        """Create the model from the mean of the uncapped exponential.

        Arguments:
        ---------
            mean_full_exponential: the mean 1/nu of the uncapped loss
            cap: the sum at risk L

        Returns:
        -------
            the severity model

        """
        return cls(nu=mean2nu(mean_full_exponential), cap=cap)

    @property
    def atom_mass(self) -> float:
        """Return the probability of a complete write-off, exp(-nu * L)."""
        return math.exp(-self.nu * self.cap)

    def mean(self) -> float:
        """Return E[Y] = (1 - exp(-nu * L)) / nu."""
        return float(-math.expm1(-self.nu * self.cap) / self.nu)

    def second_moment(self) -> float:
        """Return E[Y^2] = 2/nu^2 - 2 exp(-nu L)/nu^2 - 2 L exp(-nu L)/nu."""
        return float(2 / self.nu**2 * _incomplete(self.nu * self.cap))

    def variance(self) -> float:
        """Return Var(Y) = E[Y^2] - E[Y]^2."""
        return self.second_moment() - self.mean() ** 2

    def exponential_limit(self) -> tuple[float, float]:
        """Return the mean and variance of the uncapped exponential.

        These are the limits of `mean` and `variance` when L grows without
        bound.

        Returns
        -------
            the pair (1/nu, 1/nu^2)

        """
        return 1 / self.nu, 1 / self.nu**2

    def excess_mean(self, d: ArrayLike) -> np.ndarray | float:
        """Return the expected excess loss E[(Y - d)_+].

        The closed form is (exp(-nu d) - exp(-nu L)) / nu; it is evaluated as
        exp(-nu d) (1 - exp(-nu (L - d))) / nu to keep precision when d is
        close to L.

        Arguments:
        ---------
            d: the deductible(s) in [0, L]

        Returns:
        -------
            the expected payment per event of an excess-of-loss contract

        """
        d = self._check_deductible(d)
        layer = -np.expm1(-self.nu * (self.cap - d))
        return as_output(np.exp(-self.nu * d) * layer / self.nu)

    def excess_second_moment(self, d: ArrayLike) -> np.ndarray | float:
        """Return E[(Y - d)_+^2].

        Closed form: 2 exp(-nu d)/nu^2 - 2 exp(-nu L)/nu^2
        + 2 (d - L) exp(-nu L)/nu.

        Arguments:
        ---------
            d: the deductible(s) in [0, L]

        Returns:
        -------
            the second moment of the excess payment per event

        """
        d = self._check_deductible(d)
        tail = _incomplete(self.nu * (self.cap - d))
        return as_output(2 / self.nu**2 * np.exp(-self.nu * d) * tail)

    def mixed_moment(self, d: ArrayLike) -> np.ndarray | float:
        """Return E[Y (Y - d)_+] = E[(Y - d)_+^2] + d E[(Y - d)_+].

        Arguments:
        ---------
            d: the deductible(s) in [0, L]

        Returns:
        -------
            the mixed moment of loss and excess payment

        """
        d = self._check_deductible(d)
        return as_output(self.excess_second_moment(d) + d * self.excess_mean(d))

    def retained_mean(self, d: ArrayLike) -> np.ndarray | float:
        """Return E[min(Y, d)] = (1 - exp(-nu d)) / nu."""
        d = self._check_deductible(d)
        return as_output(-np.expm1(-self.nu * d) / self.nu)

    def retained_second_moment(self, d: ArrayLike) -> np.ndarray | float:
        """Return G(d) = E[min(Y, d)^2] = 2/nu^2 (1 - exp(-nu d)(1 + nu d)).

        Arguments:
        ---------
            d: the deductible(s) in [0, L]

        Returns:
        -------
            the second moment of the retained loss per event

        """
        d = self._check_deductible(d)
        return as_output(2 / self.nu**2 * _incomplete(self.nu * d))

    def _check_deductible(self, d: ArrayLike) -> np.ndarray:
        """Return `d` as an array after checking it lies in [0, L].

        Raises
        ------
            CoreValueError: if any deductible is outside [0, L].

        """
        values = np.asarray(d, dtype=float)
        if np.any(~np.isfinite(values)) or np.any(values < 0) or np.any(
            values > self.cap
        ):
            raise CoreValueError(
                f"Deductible {d} is outside [0, {self.cap}]."
            )
        return values


def as_output(values: np.ndarray) -> np.ndarray | float:
    """Return a python float for 0-d results and the array otherwise."""
    values = np.asarray(values)
    return float(values) if values.ndim == 0 else values
