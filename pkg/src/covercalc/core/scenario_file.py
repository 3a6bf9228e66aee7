"""Scenario files: YAML documents with one section per model component.

Example:
-------
    preferences: {w0: 150000, beta: normalized}
    severity: {mean_full_exponential: 350000, L: 500000}
    frequency: {lambda: 1/50}
    indemnity: {theta_d: 0.3, gamma_d: 0}
    parametric: {theta_p: 0.3, gamma_p: 0}

Missing sections and keys take the baseline values. Numbers may be written as
fractions such as `1/50`.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml
from yaml.nodes import MappingNode, Node

from covercalc.core.conversions import per_event2per_period, wealth2beta
from covercalc.core.exceptions import CoreParseError
from covercalc.core.objective import Preferences, Scenario
from covercalc.core.pricing import CountFamily, FrequencyModel, PricingParams
from covercalc.core.severity import SeverityModel

NORMALIZED: str = "normalized"

BASELINE: dict[str, dict[str, Any]] = {
    "preferences": {"w0": 150_000.0, "beta": NORMALIZED},
    "severity": {"nu": 1 / 350_000, "L": 500_000.0},
    "frequency": {"lambda": 1 / 50},
    "indemnity": {"theta_d": 0.3, "gamma_d": 0.0},
    "parametric": {"theta_p": 0.3, "gamma_p": 0.0},
}

KEYS: dict[str, set[str]] = {
    "preferences": {"w0", "beta", "normalized"},
    "severity": {"nu", "mean_full_exponential", "L"},
    "frequency": {"lambda", "mean", "variance", "family"},
    "indemnity": {"theta_d", "gamma_d"},
    "parametric": {"theta_p", "gamma_p"},
}


def baseline() -> Scenario:
    """Return the built-in calibration: a house worth 500,000, w0 = 150,000."""
    return build_scenario({})


def load_scenario(path: str | Path, per_event_gamma: bool = False) -> Scenario:
    """Read a scenario file.

    Arguments:
    ---------
        path: the YAML file
        per_event_gamma: whether gamma_d and gamma_p are costs per event

    Raises:
    ------
        CoreParseError: if the file cannot be read or does not follow the
            format; the message names the key path and line.
        CoreValueError: if a value breaks a model invariant.

    Returns:
    -------
        the scenario

    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise CoreParseError(f"Cannot read scenario file {path}: {error}") from error

    logging.debug("Loading scenario file %s", path)
    return build_scenario(parse_document(text), per_event_gamma)


def parse_document(text: str) -> dict[str, dict[str, tuple[Any, int]]]:
    """Return the sections of a YAML document with the line of every value.

    Raises
    ------
        CoreParseError: for invalid YAML, unknown sections or unknown keys.

    """
    loader = yaml.SafeLoader(text)
    try:
        root = loader.get_single_node()
        if root is None:
            return {}
        _require_mapping(root, "document")

        sections: dict[str, dict[str, tuple[Any, int]]] = {}
        for key_node, section_node in root.value:
            section = str(key_node.value)
            if section not in KEYS:
                raise CoreParseError(
                    f"{section} (line {_line(key_node)}): unknown section; "
                    f"expected one of {sorted(KEYS)}."
                )
            _require_mapping(section_node, section)

            values: dict[str, tuple[Any, int]] = {}
            for item_node, value_node in section_node.value:
                key = str(item_node.value)
                if key not in KEYS[section]:
                    raise CoreParseError(
                        f"{section}.{key} (line {_line(item_node)}): unknown key; "
                        f"expected one of {sorted(KEYS[section])}."
                    )
                value = loader.construct_object(value_node, deep=True)
                values[key] = (value, _line(value_node))
            sections[section] = values
        return sections
    except yaml.MarkedYAMLError as error:
        line = error.problem_mark.line + 1 if error.problem_mark else "?"
        raise CoreParseError(f"Invalid YAML (line {line}): {error.problem}") from error
    except yaml.YAMLError as error:
        raise CoreParseError(f"Invalid YAML: {error}") from error
    finally:
        loader.dispose()


def build_scenario(
    sections: dict[str, dict[str, tuple[Any, int]]], per_event_gamma: bool = False
) -> Scenario:
    """Return the scenario of parsed sections, completed from the baseline.

    Arguments:
    ---------
        sections: the output of `parse_document`
        per_event_gamma: whether to scale the fixed costs by E[N]

    Returns:
    -------
        the scenario

    """
    reader = _Reader(sections)

    initial_wealth = reader.number("preferences", "w0")
    prefs = Preferences(initial_wealth, reader.risk_aversion(initial_wealth))

    cap = reader.number("severity", "L")
    if reader.given("severity", "nu"):
        if reader.given("severity", "mean_full_exponential"):
            logging.warning(
                "severity.nu and severity.mean_full_exponential both given; "
                "using nu."
            )
        sev = SeverityModel(reader.number("severity", "nu"), cap)
    elif reader.given("severity", "mean_full_exponential"):
        sev = SeverityModel.from_mean(
            reader.number("severity", "mean_full_exponential"), cap
        )
    else:
        sev = SeverityModel(reader.number("severity", "nu"), cap)

    freq = reader.frequency()

    gamma_d = reader.number("indemnity", "gamma_d")
    gamma_p = reader.number("parametric", "gamma_p")
    if per_event_gamma:
        gamma_d = per_event2per_period(gamma_d, freq.mean)
        gamma_p = per_event2per_period(gamma_p, freq.mean)

    return Scenario(
        prefs,
        sev,
        freq,
        PricingParams(reader.number("indemnity", "theta_d"), gamma_d),
        PricingParams(reader.number("parametric", "theta_p"), gamma_p),
    )


def scenario_dict(s: Scenario) -> dict[str, dict[str, Any]]:
    """Return the scenario in the section layout of the file format."""
    return {
        "preferences": {"w0": s.prefs.initial_wealth, "beta": s.beta},
        "severity": {"nu": s.sev.nu, "L": s.sev.cap},
        "frequency": {
            "mean": s.freq.mean,
            "variance": s.freq.variance,
            "family": s.freq.family.value,
        },
        "indemnity": {
            "theta_d": s.indemnity_pricing.loading,
            "gamma_d": s.indemnity_pricing.fixed_cost,
        },
        "parametric": {
            "theta_p": s.parametric_pricing.loading,
            "gamma_p": s.parametric_pricing.fixed_cost,
        },
    }


class _Reader:
    """Look up values in parsed sections, falling back to the baseline."""

    def __init__(self, sections: dict[str, dict[str, tuple[Any, int]]]) -> None:
        self.sections = sections

    def given(self, section: str, key: str) -> bool:
        return key in self.sections.get(section, {})

    def raw(self, section: str, key: str) -> tuple[Any, int | None]:
        if self.given(section, key):
            return self.sections[section][key]
        return BASELINE[section].get(key), None

    def number(self, section: str, key: str) -> float:
        value, line = self.raw(section, key)
        return _number(value, f"{section}.{key}", line)

    def risk_aversion(self, initial_wealth: float) -> float:
        beta, line = self.raw("preferences", "beta")
        normalized, normalized_line = self.raw("preferences", "normalized")
        if normalized is not None and not isinstance(normalized, bool):
            raise CoreParseError(
                f"preferences.normalized (line {normalized_line}): expected "
                f"true or false, got {normalized!r}."
            )

        if beta == NORMALIZED or (normalized and not self.given("preferences", "beta")):
            return wealth2beta(initial_wealth)

        value = _number(beta, "preferences.beta", line)
        if normalized:
            logging.warning(
                "preferences.beta = %s overrides normalized risk aversion.", value
            )
        return value

    def frequency(self) -> FrequencyModel:
        family_name, family_line = self.raw("frequency", "family")
        family: CountFamily | None = None
        if family_name is not None:
            try:
                family = CountFamily(str(family_name))
            except ValueError as error:
                raise CoreParseError(
                    f"frequency.family (line {family_line}): unknown family "
                    f"{family_name!r}; expected one of "
                    f"{[member.value for member in CountFamily]}."
                ) from error

        if self.given("frequency", "lambda"):
            if self.given("frequency", "mean") or self.given("frequency", "variance"):
                _, line = self.raw("frequency", "lambda")
                raise CoreParseError(
                    f"frequency.lambda (line {line}): give either lambda or "
                    "mean and variance."
                )
            return FrequencyModel.poisson(self.number("frequency", "lambda"))

        if not self.given("frequency", "mean"):
            if family not in (None, CountFamily.POISSON):
                raise CoreParseError(
                    f"frequency.family (line {family_line}): {family.value} "
                    "counts need frequency.mean and frequency.variance."
                )
            return FrequencyModel.poisson(self.number("frequency", "lambda"))

        mean = self.number("frequency", "mean")
        variance = (
            self.number("frequency", "variance")
            if self.given("frequency", "variance")
            else mean
        )
        return FrequencyModel.general(mean, variance, family)


def _number(value: Any, path: str, line: int | None) -> float:
    """Return `value` as a float; strings may hold fractions such as 1/50."""
    where = f"{path} (line {line})" if line is not None else path
    if isinstance(value, bool):
        raise CoreParseError(f"{where}: expected a number, got {value!r}.")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise CoreParseError(f"{where}: expected a number, got {value!r}.")


def _require_mapping(node: Node, path: str) -> None:
    if not isinstance(node, MappingNode):
        raise CoreParseError(f"{path} (line {_line(node)}): expected a mapping.")


def _line(node: Node) -> int:
    return node.start_mark.line + 1
