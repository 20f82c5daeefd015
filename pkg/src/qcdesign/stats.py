"""Replicated paired comparison of procedures and the sign test.

Every replicate draws its deviate series from a stream that is a pure
function of (base_seed, replicate), and all procedures consume the same
series (a paired, common-random-numbers design). Procedures are ranked
by mean comparison objective; each is sign-tested against the top one on
the per-replicate values.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

from .error_model import CriticalErrors
from .errors import InvalidArgumentError
from .objective import comparison_f1
from .rng import new_stream
from .rules import Procedure
from .simulator import (
    IDS_PER_SIMULATION,
    SimulationPlan,
    draw_condition_pools,
    estimate_performance,
)


@dataclass(frozen=True)
class SignTestResult:
    p_value: float
    n_effective: int
    below: int
    ties_only: bool


def sign_test(a: Sequence[float], b: Sequence[float]) -> SignTestResult:
    """Exact two-sided sign test on paired values; ties are dropped."""
    if len(a) != len(b):
        raise InvalidArgumentError("paired samples must have equal length")
    if not a:
        raise InvalidArgumentError("paired samples must be non-empty")
    below = sum(x < y for x, y in zip(a, b))
    above = sum(x > y for x, y in zip(a, b))
    n = below + above
    if n == 0:
        return SignTestResult(p_value=1.0, n_effective=0, below=0, ties_only=True)
    tail = min(below, above)
    cdf = sum(math.comb(n, i) for i in range(tail + 1)) * 0.5**n
    return SignTestResult(
        p_value=min(1.0, 2.0 * cdf), n_effective=n, below=below, ties_only=False
    )


def summarize(values: Sequence[float]):
    """(mean, sample SD with n-1 divisor)."""
    if len(values) < 2:
        raise InvalidArgumentError("need at least two values for a sample SD")
    return statistics.fmean(values), statistics.stdev(values)


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    mean_p_re: float
    sd_p_re: float
    mean_p_se: float
    sd_p_se: float
    mean_p_fr: float
    sd_p_fr: float
    mean_f1: float
    sd_f1: float
    f1_values: tuple
    sign_p_vs_top: Optional[float]  # None for the top row
    ties_only_vs_top: bool = False


@dataclass(frozen=True)
class ComparisonResult:
    rows: tuple  # sorted by mean_f1 ascending
    replicates: int
    base_seed: int


def _replicate_estimates(args):
    """Estimates for one replicate across all procedures (paired streams)."""
    procedures, plan, critical, base_seed, replicate = args
    base = new_stream(base_seed, replicate * IDS_PER_SIMULATION)
    pools = draw_condition_pools(base, plan.measurements_per_level)
    return [
        estimate_performance(proc, plan, critical, pools=pools)
        for _, proc in procedures
    ]


def compare_procedures(
    procedures: Sequence[tuple],
    plan_template: SimulationPlan,
    critical: CriticalErrors,
    replicates: int = 21,
    base_seed: int = 12345,
    threads: int = 1,
) -> ComparisonResult:
    """Paired replicated comparison of named procedures.

    ``procedures`` is a sequence of (name, Procedure). Results are
    independent of ``threads``: replicate tasks are pure functions of
    (base_seed, replicate) and are reassembled in replicate order.
    """
    if replicates < 2:
        raise InvalidArgumentError("need at least two replicates")
    for name, proc in procedures:
        if not isinstance(proc, Procedure):
            raise InvalidArgumentError(f"entry {name!r} is not a Procedure")

    tasks = [
        (list(procedures), plan_template, critical, base_seed, r)
        for r in range(replicates)
    ]
    if threads > 1:
        import multiprocessing

        with multiprocessing.Pool(threads) as pool:
            per_replicate = pool.map(_replicate_estimates, tasks)
    else:
        per_replicate = [_replicate_estimates(t) for t in tasks]

    rows = []
    for index, (name, _) in enumerate(procedures):
        estimates = [per_replicate[r][index] for r in range(replicates)]
        f1s = tuple(comparison_f1(e) for e in estimates)
        mean_re, sd_re = summarize([e.p_re for e in estimates])
        mean_se, sd_se = summarize([e.p_se for e in estimates])
        mean_fr, sd_fr = summarize([e.p_fr for e in estimates])
        mean_f1, sd_f1 = summarize(list(f1s))
        rows.append(
            ComparisonRow(
                name=name,
                mean_p_re=mean_re,
                sd_p_re=sd_re,
                mean_p_se=mean_se,
                sd_p_se=sd_se,
                mean_p_fr=mean_fr,
                sd_p_fr=sd_fr,
                mean_f1=mean_f1,
                sd_f1=sd_f1,
                f1_values=f1s,
                sign_p_vs_top=None,
            )
        )

    rows.sort(key=lambda row: row.mean_f1)
    top = rows[0]
    final = [top]
    for row in rows[1:]:
        test = sign_test(top.f1_values, row.f1_values)
        final.append(
            ComparisonRow(
                **{
                    **row.__dict__,
                    "sign_p_vs_top": test.p_value,
                    "ties_only_vs_top": test.ties_only,
                }
            )
        )
    return ComparisonResult(
        rows=tuple(final), replicates=replicates, base_seed=base_seed
    )
