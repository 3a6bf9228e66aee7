"""Independent checks of the closed forms.

The quadrature integrates each severity moment numerically, the simulator
draws whole years of events and the grid search maximises the objective by
brute force. None of them uses the closed-form moments of `severity`.
"""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad

from covercalc.core.exceptions import CoreValueError, QuadratureError
from covercalc.core.objective import Scenario, mv_indemnity, mv_parametric
from covercalc.core.pricing import (
    CountFamily,
    FrequencyModel,
    indemnity_premium,
    parametric_premium,
)
from covercalc.core.severity import SeverityModel

QUAD_EPSREL: float = 1e-10
QUAD_LIMIT: int = 200
BLOCK_YEARS: int = 250_000
MIN_GRID_POINTS: int = 1_000


class Integrand(Enum):
    """Functions of the loss Y that `quadrature_moment` integrates."""

    ONE = "1"
    LOSS = "Y"
    LOSS_SQUARED = "Y^2"
    EXCESS = "(Y-d)+"
    EXCESS_SQUARED = "(Y-d)+^2"
    LOSS_TIMES_EXCESS = "Y(Y-d)+"
    RETAINED = "min(Y,d)"
    RETAINED_SQUARED = "min(Y,d)^2"

    def function(self, d: float) -> Callable[[float], float]:
        """Return the integrand as a function of the loss for deductible `d`."""
        functions: dict[Integrand, Callable[[float], float]] = {
            Integrand.ONE: lambda y: 1.0,
            Integrand.LOSS: lambda y: y,
            Integrand.LOSS_SQUARED: lambda y: y * y,
            Integrand.EXCESS: lambda y: max(y - d, 0.0),
            Integrand.EXCESS_SQUARED: lambda y: max(y - d, 0.0) ** 2,
            Integrand.LOSS_TIMES_EXCESS: lambda y: y * max(y - d, 0.0),
            Integrand.RETAINED: lambda y: min(y, d),
            Integrand.RETAINED_SQUARED: lambda y: min(y, d) ** 2,
        }
        return functions[self]


class DesignKind(Enum):
    """The contract held in a simulated year."""

    NONE = "none"
    INDEMNITY = "indemnity"
    PARAMETRIC = "parametric"


@dataclass(frozen=True)
class Design:
    """A contract: its kind and its deductible or payment per event."""

    kind: DesignKind
    parameter: float = 0.0

    def __post_init__(self) -> None:
        """Validate the parameter."""
        if not (math.isfinite(self.parameter) and self.parameter >= 0):
            raise CoreValueError(
                f"Contract parameter {self.parameter} must be non-negative."
            )


@dataclass(frozen=True)
class SimulationConfig:
    """Settings of a Monte Carlo run.

    Attributes
    ----------
        num_years: int
            Simulated years; with `antithetic` each year also gets a mirror
            year, so twice as many years are drawn.
        seed: int
            Root seed in [0, 2^64).
        antithetic: bool
            Pair every year with a mirror year that shares its event count
            and uses the severity uniforms 1 - U.
        workers: int
            Threads that simulate blocks; the estimate does not depend on it.

    """

    num_years: int
    seed: int = 0
    antithetic: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        """Validate the settings."""
        if self.num_years < 1:
            raise CoreValueError(f"num_years must be at least 1, got {self.num_years}.")
        if not 0 <= self.seed < 2**64:
            raise CoreValueError(f"Seed {self.seed} is not a 64-bit unsigned integer.")
        if self.workers < 1:
            raise CoreValueError(f"workers must be at least 1, got {self.workers}.")

    @property
    def num_blocks(self) -> int:
        """Return the number of blocks the years are split into."""
        return -(-self.num_years // BLOCK_YEARS)


@dataclass(frozen=True)
class MCEstimate:
    """Sample statistics of simulated terminal wealth.

    `mv` equals `mean - beta * variance`; its standard error follows from the
    delta method with fourth-moment plug-in.
    """

    mean: float
    variance: float
    mv: float
    std_error_mean: float
    std_error_mv: float
    num_draws: int

    def z_score(self, closed_form: float) -> float | None:
        """Return (mv - closed_form) / std_error_mv, or None without spread."""
        if self.std_error_mv > 0:
            return (self.mv - closed_form) / self.std_error_mv
        return None


def quadrature_moment(
    model: SeverityModel, integrand: Integrand, d: float = 0.0
) -> float:
    """Return E[f(Y)] by adaptive quadrature of the censored law.

    The continuous part f(y) nu exp(-nu y) is integrated over [0, L), split at
    the deductible where f has a kink; the atom adds f(L) exp(-nu L).

    Arguments:
    ---------
        model: the severity model
        integrand: the function f of the loss
        d: the deductible in [0, L], ignored by f without one

    Raises:
    ------
        CoreValueError: if `d` lies outside [0, L].
        QuadratureError: if a piece does not converge.

    Returns:
    -------
        the moment

    """
    if not 0 <= d <= model.cap:
        raise CoreValueError(f"Deductible {d} is outside [0, {model.cap}].")

    func = integrand.function(d)
    nu, cap = model.nu, model.cap

    def density_weighted(y: float) -> float:
        return func(y) * nu * math.exp(-nu * y)

    continuous: float = 0.0
    for low, high in ((0.0, d), (d, cap)):
        if high <= low:
            continue
        result = quad(
            density_weighted,
            low,
            high,
            epsabs=0.0,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
            full_output=1,
        )
        if len(result) > 3:
            raise QuadratureError(
                f"Quadrature of {integrand.value} on [{low}, {high}] failed: "
                f"{result[3]}"
            )
        continuous += result[0]

    return continuous + func(cap) * model.atom_mass


def sample_severity(
    model: SeverityModel,
    rng: np.random.Generator,
    size: int,
    uniforms: np.ndarray | None = None,
) -> np.ndarray:
    """Return losses min(-log(1 - U) / nu, L) drawn by inversion.

    Arguments:
    ---------
        model: the severity model
        rng: the generator, used only when `uniforms` is None
        size: the number of losses
        uniforms: uniforms on [0, 1] to transform instead of fresh draws

    Returns:
    -------
        the losses, each in [0, L]

    """
    if uniforms is None:
        uniforms = rng.random(size)
    with np.errstate(divide="ignore"):
        uncapped = -np.log1p(-uniforms) / model.nu
    return np.minimum(uncapped, model.cap)


def sample_counts(
    freq: FrequencyModel, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Return event counts per year.

    Poisson counts use the mean; negative binomial counts use
    n = mu^2 / (sigma^2 - mu) and p = mu / sigma^2.

    Raises
    ------
        CoreValueError: if the counts are only known through their moments.

    """
    if freq.family is CountFamily.POISSON:
        return rng.poisson(freq.mean, size)
    if freq.family is CountFamily.NEGATIVE_BINOMIAL:
        n = freq.mean**2 / (freq.variance - freq.mean)
        p = freq.mean / freq.variance
        return rng.negative_binomial(n, p, size)
    raise CoreValueError(
        "Counts known only through mean and variance cannot be simulated; "
        "name a family."
    )


def simulate_wealth(s: Scenario, design: Design, cfg: SimulationConfig) -> MCEstimate:
    """Estimate mean, variance and MV of terminal wealth by simulation.

    Each year draws N events and N losses and computes
    W = w0 - premium - S + benefit. The years are cut into blocks of
    BLOCK_YEARS; block i uses the i-th child of SeedSequence(seed) with a
    PCG64 generator, so the estimate is the same for any number of workers.
    Statistics are accumulated on W - w0 + premium, which is 0 in every year
    under full cover.

    Arguments:
    ---------
        s: the scenario
        design: the contract held
        cfg: the simulation settings

    Returns:
    -------
        the estimate

    """
    if design.parameter > s.sev.cap:
        raise CoreValueError(
            f"Contract parameter {design.parameter} exceeds the cap {s.sev.cap}."
        )

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.num_blocks)
    sizes = [
        min(BLOCK_YEARS, cfg.num_years - i * BLOCK_YEARS)
        for i in range(cfg.num_blocks)
    ]

    def run_block(i: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(children[i]))
        return _block_sums(s, design, rng, sizes[i], cfg.antithetic)

    logging.debug(
        "Simulating %s years in %s blocks on %s workers",
        cfg.num_years,
        cfg.num_blocks,
        cfg.workers,
    )
    if cfg.workers == 1:
        blocks = [run_block(i) for i in range(cfg.num_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            blocks = list(pool.map(run_block, range(cfg.num_blocks)))

    totals = np.zeros(5)
    for block in blocks:
        totals += block

    return _estimate(s, design, cfg, totals)


def grid_search_optimum(s: Scenario, kind: DesignKind, points: int) -> float:
    """Return the argmax of the MV objective on a uniform grid over [0, L].

    Raises
    ------
        CoreValueError: if fewer than MIN_GRID_POINTS points are asked for, or
            the design has no parameter.

    """
    if points < MIN_GRID_POINTS:
        raise CoreValueError(f"Grid search needs at least {MIN_GRID_POINTS} points.")

    grid = np.linspace(0.0, s.sev.cap, points)
    if kind is DesignKind.INDEMNITY:
        values = mv_indemnity(s, grid)
    elif kind is DesignKind.PARAMETRIC:
        values = mv_parametric(s, grid)
    else:
        raise CoreValueError("Grid search needs the indemnity or parametric design.")
    return float(grid[np.argmax(values)])


def premium(s: Scenario, design: Design) -> float:
    """Return the premium paid for `design`; 0 without cover."""
    if design.kind is DesignKind.INDEMNITY:
        return indemnity_premium(s.sev, s.freq, s.indemnity_pricing, design.parameter)
    if design.kind is DesignKind.PARAMETRIC:
        return parametric_premium(s.freq, s.parametric_pricing, design.parameter)
    return 0.0


def _year_flows(
    s: Scenario, design: Design, counts: np.ndarray, losses: np.ndarray
) -> np.ndarray:
    """Return benefit - S per year, the random part of terminal wealth."""
    years = np.repeat(np.arange(counts.size), counts)
    if design.kind is DesignKind.INDEMNITY:
        weights = -np.minimum(losses, design.parameter)
    elif design.kind is DesignKind.PARAMETRIC:
        weights = design.parameter - losses
    else:
        weights = -losses
    return np.bincount(years, weights=weights, minlength=counts.size)


def _block_sums(
    s: Scenario,
    design: Design,
    rng: np.random.Generator,
    size: int,
    antithetic: bool,
) -> np.ndarray:
    """Return sums of p, q, p^2, q^2 and p q over the units of one block.

    A unit is a year, or a year and its mirror; p is the sum of the flows of
    the unit and q the sum of their squares.
    """
    counts = sample_counts(s.freq, rng, size)
    uniforms = rng.random(int(counts.sum()))
    flows = _year_flows(s, design, counts, sample_severity(s.sev, rng, 0, uniforms))
    p, q = flows, flows**2
    if antithetic:
        mirror = _year_flows(
            s, design, counts, sample_severity(s.sev, rng, 0, 1 - uniforms)
        )
        p, q = p + mirror, q + mirror**2
    return np.array([p.sum(), q.sum(), (p * p).sum(), (q * q).sum(), (p * q).sum()])


def _estimate(
    s: Scenario, design: Design, cfg: SimulationConfig, totals: np.ndarray
) -> MCEstimate:
    """Turn the accumulated unit sums into an `MCEstimate`."""
    sum_p, sum_q, sum_pp, sum_qq, sum_pq = totals
    units: int = cfg.num_years
    per_unit: int = 2 if cfg.antithetic else 1
    draws: int = units * per_unit
    beta: float = s.beta

    flow_mean: float = sum_p / draws
    spread: float = max(sum_q / draws - flow_mean**2, 0.0)
    variance: float = spread * draws / (draws - 1) if draws > 1 else 0.0

    std_error_mean = std_error_mv = 0.0
    if units > 1:
        scale = units / (units - 1)
        var_p = max(sum_pp / units - (sum_p / units) ** 2, 0.0) * scale
        var_q = max(sum_qq / units - (sum_q / units) ** 2, 0.0) * scale
        cov_pq = (sum_pq / units - sum_p * sum_q / units**2) * scale
        slope = 1 + 2 * beta * flow_mean
        influence = (
            slope**2 * var_p - 2 * beta * slope * cov_pq + beta**2 * var_q
        ) / per_unit**2
        std_error_mean = math.sqrt(var_p / units) / per_unit
        std_error_mv = math.sqrt(max(influence, 0.0) / units)

    mean: float = s.prefs.initial_wealth - premium(s, design) + flow_mean
    return MCEstimate(
        mean=mean,
        variance=variance,
        mv=mean - beta * variance,
        std_error_mean=std_error_mean,
        std_error_mv=std_error_mv,
        num_draws=draws,
    )
