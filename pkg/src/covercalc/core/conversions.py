import math

from covercalc.core.exceptions import CoreValueError


def nu2mean(nu: float) -> float:
    """Return the mean of the uncapped exponential with rate `nu`.

    Arguments:
    ---------
        nu: the exponential rate per currency unit

    Returns:
    -------
        the mean severity 1/nu in currency

    """
    return 1 / nu


def mean2nu(mean: float) -> float:
    """Return the exponential rate that corresponds to `mean`.

    Arguments:
    ---------
        mean: the mean of the uncapped exponential in currency

    Raises:
    ------
        CoreValueError: if the mean is not strictly positive and finite.

    Returns:
    -------
        the rate per currency unit

    """
    if not (math.isfinite(mean) and mean > 0):
        raise CoreValueError(f"Invalid mean severity: {mean}")
    return 1 / mean


def wealth2beta(initial_wealth: float) -> float:
    """Return the risk aversion normalised by initial wealth, beta = 1/w0.

    Arguments:
    ---------
        initial_wealth: the initial wealth w0 in currency

    Returns:
    -------
        the risk aversion in 1/currency

    """
    if not (math.isfinite(initial_wealth) and initial_wealth > 0):
        raise CoreValueError(f"Invalid initial wealth: {initial_wealth}")
    return 1 / initial_wealth


def per_event2per_period(gamma: float, mean_count: float) -> float:
    """Return a per-event fixed cost as a per-period fixed cost.

    Fixed costs enter the premium once per period. A cost charged per event
    is therefore scaled by the expected number of events.

    Arguments:
    ---------
        gamma: the fixed cost per event in currency
        mean_count: the expected number of events per period

    Returns:
    -------
        the fixed cost per period in currency

    """
    return gamma * mean_count


def cents(amount: float) -> float:
    """Return the amount rounded to 2 decimals for export."""
    return round(float(amount), 2)
