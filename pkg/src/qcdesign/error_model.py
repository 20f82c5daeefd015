"""Critical analytical errors and analytic power oracles.

The critical systematic error is the mean shift (in SD units) at which
the probability of a result exceeding the medically allowable total
error equals the clinical type I bound; the critical random error is the
SD inflation multiplier doing the same. Both are found by bisection on
the two-sided exceedance equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleAssayError, InvalidArgumentError

_SQRT2 = math.sqrt(2.0)
_BISECTION_TOL = 1e-6


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / _SQRT2))


@dataclass(frozen=True)
class AssayParams:
    """In-control SD, bias, and allowable total error, all in analyte units."""

    sd: float
    bias: float
    tea: float
    alpha: float

    def __post_init__(self):
        if self.sd <= 0:
            raise InvalidArgumentError(f"sd must be positive, got {self.sd}")
        if self.tea <= abs(self.bias):
            raise InvalidArgumentError(
                f"tea ({self.tea}) must exceed |bias| ({abs(self.bias)})"
            )
        if not 0 < self.alpha < 1:
            raise InvalidArgumentError(f"alpha must be in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class CriticalErrors:
    delta_se: float  # mean shift, SD units
    k_re: float  # SD multiplier, >= 1


def _shift_exceedance(p: AssayParams, delta: float) -> float:
    """P(|result error| > tea) under a mean shift of delta SD."""
    return (
        normal_cdf((-p.tea - p.bias - delta * p.sd) / p.sd)
        + 1.0
        - normal_cdf((p.tea - p.bias - delta * p.sd) / p.sd)
    )


def _inflation_exceedance(p: AssayParams, k: float) -> float:
    """P(|result error| > tea) when the SD is inflated by factor k."""
    return (
        normal_cdf((-p.tea - p.bias) / (k * p.sd))
        + 1.0
        - normal_cdf((p.tea - p.bias) / (k * p.sd))
    )


def _bisect(f, lo: float, hi: float) -> float:
    # f must be negative at lo and positive at hi
    while hi - lo > _BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def critical_systematic_error(p: AssayParams) -> float:
    """Mean shift (SD units) at which the total-error exceedance equals alpha."""
    at_zero = _shift_exceedance(p, 0.0)
    if at_zero >= p.alpha:
        if at_zero - p.alpha < _BISECTION_TOL:
            return 0.0
        raise InfeasibleAssayError(
            f"in-control exceedance {at_zero:.6g} already exceeds alpha {p.alpha}"
        )
    hi = (p.tea - p.bias) / p.sd + 10.0
    if _shift_exceedance(p, hi) < p.alpha:
        raise InfeasibleAssayError("no critical systematic error in bracket")
    return _bisect(lambda d: _shift_exceedance(p, d) - p.alpha, 0.0, hi)


def critical_random_error(p: AssayParams) -> float:
    """SD multiplier (>= 1) at which the total-error exceedance equals alpha."""
    at_one = _inflation_exceedance(p, 1.0)
    if at_one >= p.alpha:
        if at_one - p.alpha < _BISECTION_TOL:
            return 1.0
        raise InfeasibleAssayError(
            f"in-control exceedance {at_one:.6g} already exceeds alpha {p.alpha}"
        )
    hi = 100.0
    if _inflation_exceedance(p, hi) < p.alpha:
        raise InfeasibleAssayError("no critical random error in bracket")
    return _bisect(lambda k: _inflation_exceedance(p, k) - p.alpha, 1.0, hi)


def critical_errors(p: AssayParams) -> CriticalErrors:
    return CriticalErrors(
        delta_se=critical_systematic_error(p), k_re=critical_random_error(p)
    )


def single_value_power_oracle(
    limit: float, meas_per_run: int, shift: float = 0.0, sd_multiplier: float = 1.0
) -> float:
    """Closed-form per-run rejection probability of the rule S(1, limit).

    A run of ``meas_per_run`` measurements rejects unless all of them
    stay inside the limit.  Matches the simulator whenever every
    measurement of the run is the newest value of some rule window, as
    with one measurement per level.
    """
    if limit < 0:
        raise InvalidArgumentError(f"limit must be >= 0, got {limit}")
    if meas_per_run < 1:
        raise InvalidArgumentError(f"meas_per_run must be >= 1, got {meas_per_run}")
    if sd_multiplier < 1:
        raise InvalidArgumentError(f"sd_multiplier must be >= 1, got {sd_multiplier}")
    p = (
        normal_cdf((-limit - shift) / sd_multiplier)
        + 1.0
        - normal_cdf((limit - shift) / sd_multiplier)
    )
    return 1.0 - (1.0 - p) ** meas_per_run
