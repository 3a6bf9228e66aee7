import logging
import math
import re
from contextlib import suppress
from fractions import Fraction
from typing import NamedTuple

from covercalc.core.exceptions import CoreParseError
from covercalc.core.oracle import Design, DesignKind

DESIGN_NAMES: dict[str, DesignKind] = {
    "none": DesignKind.NONE,
    "indemnity": DesignKind.INDEMNITY,
    "parametric": DesignKind.PARAMETRIC,
}


class Sweep(NamedTuple):
    """Inclusive range split into `steps` points."""

    minimum: float
    maximum: float
    steps: int


def parse_amount(amount: str) -> float:
    """Return a non-negative, finite number.

    Thousands separators (`_` and `,`) and fractions such as `1/50` are
    accepted.

    Arguments:
    ---------
        amount: the number as a string

    Raises:
    ------
        CoreParseError: if the amount is not a non-negative number.

    Returns:
    -------
        the amount as a float

    """
    cleaned: str = re.sub(r"[_, ]", "", amount)
    value: float = math.nan
    with suppress(ValueError, ZeroDivisionError):
        value = float(Fraction(cleaned))

    if not (math.isfinite(value) and value >= 0):
        raise CoreParseError(f"Invalid amount {amount!r}: expected a number >= 0.")
    return value


def parse_sweep(sweep: str) -> Sweep:
    """Return the range `min:max:steps`.

    Arguments:
    ---------
        sweep: the range as a string, e.g. `0:12000:241`

    Raises:
    ------
        CoreParseError: if the format is wrong, min >= max or steps < 2.

    Returns:
    -------
        the parsed range

    """
    parts: list[str] = sweep.split(":")
    logging.debug("Found sweep parts: %s", parts)
    if len(parts) != 3:
        raise CoreParseError(f"Invalid range {sweep!r}: expected min:max:steps.")

    minimum, maximum = (_signed_number(part, sweep) for part in parts[:2])
    try:
        steps = int(parts[2])
    except ValueError as error:
        raise CoreParseError(
            f"Invalid range {sweep!r}: steps must be an integer."
        ) from error

    if not minimum < maximum:
        raise CoreParseError(f"Invalid range {sweep!r}: min must be below max.")
    if steps < 2:
        raise CoreParseError(f"Invalid range {sweep!r}: at least 2 steps needed.")
    return Sweep(minimum, maximum, steps)


def parse_grid(grid: str) -> tuple[Sweep, Sweep]:
    """Return both axes of `a1min:a1max:a1steps,a2min:a2max:a2steps`.

    Raises
    ------
        CoreParseError: if there are not exactly two valid ranges.

    """
    axes: list[str] = grid.split(",")
    if len(axes) != 2:
        raise CoreParseError(
            f"Invalid grid {grid!r}: expected two ranges separated by a comma."
        )
    first, second = (parse_sweep(axis) for axis in axes)
    return first, second


def parse_design(design: str) -> Design:
    """Return the contract `none`, `indemnity:<d>` or `parametric:<k>`.

    Arguments:
    ---------
        design: the contract as a string

    Raises:
    ------
        CoreParseError: if the name is unknown or the parameter is missing.

    Returns:
    -------
        the contract

    """
    name, _, parameter = design.lower().partition(":")
    kind: DesignKind | None = DESIGN_NAMES.get(name.strip())
    if kind is None:
        raise CoreParseError(
            f"Unknown design {design!r}: expected one of {sorted(DESIGN_NAMES)}."
        )
    if kind is DesignKind.NONE:
        if parameter:
            raise CoreParseError("The design `none` takes no parameter.")
        return Design(kind)
    if not parameter:
        raise CoreParseError(
            f"The design {name!r} needs a parameter, e.g. {name}:1000."
        )
    return Design(kind, parse_amount(parameter))


def _signed_number(text: str, source: str) -> float:
    with suppress(ValueError, ZeroDivisionError):
        value = float(Fraction(re.sub(r"[_ ]", "", text)))
        if math.isfinite(value):
            return value
    raise CoreParseError(f"Invalid range {source!r}: {text!r} is not a number.")
