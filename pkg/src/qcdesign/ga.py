"""Deterministic-crowding genetic algorithm over procedure genomes.

Parents are paired at random; their children compete only against the
most genotypically similar parent and replace it only when strictly
fitter, or equally fit with fewer operators. By default every
evaluation in a run uses the same simulation substreams (common random
numbers), which makes the crowding comparisons meaningful and the
best-fitness trajectory monotone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .error_model import AssayParams, CriticalErrors, critical_errors
from .errors import InvalidArgumentError
from .genome import Genome, GenomeLayout, decode, genome_length, hamming_distance
from .objective import ObjectiveConfig, comparison_f1, fitness_f
from .rng import RandomStream, new_stream
from .rules import canonical_notation
from .simulator import (
    IDS_PER_SIMULATION,
    PerformanceEstimate,
    SimulationPlan,
    draw_condition_pools,
    estimate_performance,
)

# Stream-id conventions within a design run (all relative to the master
# seed): ids 0..7 hold the fixed simulation substreams, id 50 the GA's
# own operations (shuffle, crossover, mutation, initialization), and
# ids 100+8g.. the per-generation simulation substreams in fresh-seed
# mode. Spacings keep every stream's draw budget inside its jump gap.
_SIM_STREAM_ID = 0
_OPS_STREAM_ID = 50
_FRESH_SIM_BASE = 100


@dataclass(frozen=True)
class GaParams:
    population: int = 600
    p_crossover: float = 1.0
    mutation_schedule: tuple = ((0, 0.0), (50, 0.0005))
    generations: int = 100
    crossover_kind: str = "single_point"
    seed: int = 12345
    fresh_seeds_per_generation: bool = False

    def __post_init__(self):
        if self.population < 2 or self.population % 2:
            raise InvalidArgumentError(
                f"population must be a positive even integer, got {self.population}"
            )
        if not 0.0 <= self.p_crossover <= 1.0:
            raise InvalidArgumentError("p_crossover must be a probability")
        if self.generations < 0:
            raise InvalidArgumentError("generations must be >= 0")
        if self.crossover_kind not in ("single_point", "two_point"):
            raise InvalidArgumentError(
                f"unknown crossover kind {self.crossover_kind!r}"
            )
        gens = [g for g, _ in self.mutation_schedule]
        if gens != sorted(set(gens)):
            raise InvalidArgumentError(
                "mutation_schedule generations must be strictly increasing"
            )

    def mutation_rate(self, generation: int) -> float:
        rate = 0.0
        for start, p in self.mutation_schedule:
            if generation >= start:
                rate = p
        return rate


@dataclass(frozen=True)
class Individual:
    genome: Genome
    fitness: float
    estimate: PerformanceEstimate
    operator_count: int


class PopulationEvaluator:
    """Caches simulations; all genomes share one set of deviate pools."""

    def __init__(
        self,
        plan: SimulationPlan,
        critical: CriticalErrors,
        cfg: ObjectiveConfig,
        sim_stream: RandomStream,
    ):
        self.plan = plan
        self.critical = critical
        self.cfg = cfg
        self._pools = draw_condition_pools(sim_stream, plan.measurements_per_level)
        self._cache: dict = {}

    def evaluate(self, genome: Genome) -> Individual:
        cached = self._cache.get(genome.bits)
        if cached is not None:
            return cached
        procedure = decode(genome)
        estimate = estimate_performance(
            procedure, self.plan, self.critical, pools=self._pools
        )
        individual = Individual(
            genome=genome,
            fitness=fitness_f(estimate, self.cfg),
            estimate=estimate,
            operator_count=procedure.operator_count,
        )
        self._cache[genome.bits] = individual
        return individual


def evaluate_population(
    genomes,
    plan: SimulationPlan,
    critical: CriticalErrors,
    cfg: ObjectiveConfig,
    generation_seed: int,
):
    """Evaluate genomes on common random numbers derived from the seed."""
    evaluator = PopulationEvaluator(
        plan, critical, cfg, new_stream(generation_seed, _SIM_STREAM_ID)
    )
    return [evaluator.evaluate(g) for g in genomes]


def _shuffle(items: list, rng: RandomStream) -> None:
    for i in range(len(items) - 1, 0, -1):
        j = int(rng.next_uniform() * (i + 1))
        items[i], items[j] = items[j], items[i]


def _crossover(a: Genome, b: Genome, params: GaParams, rng: RandomStream):
    bits_a, bits_b = list(a.bits), list(b.bits)
    length = len(bits_a)
    if params.crossover_kind == "single_point":
        cut = 1 + int(rng.next_uniform() * (length - 1))
        child1 = bits_a[:cut] + bits_b[cut:]
        child2 = bits_b[:cut] + bits_a[cut:]
    else:
        c1 = 1 + int(rng.next_uniform() * (length - 1))
        c2 = 1 + int(rng.next_uniform() * (length - 1))
        lo, hi = min(c1, c2), max(c1, c2)
        child1 = bits_a[:lo] + bits_b[lo:hi] + bits_a[hi:]
        child2 = bits_b[:lo] + bits_a[lo:hi] + bits_b[hi:]
    return (
        Genome(tuple(child1), a.layout),
        Genome(tuple(child2), a.layout),
    )


def _mutate(genome: Genome, rate: float, rng: RandomStream) -> Genome:
    if rate <= 0.0:
        return genome
    bits = list(genome.bits)
    changed = False
    for i in range(len(bits)):
        if rng.next_uniform() < rate:
            bits[i] ^= 1
            changed = True
    return Genome(tuple(bits), genome.layout) if changed else genome


def crowding_generation(
    population: list,
    params: GaParams,
    evaluate: Callable[[Genome], Individual],
    rng: RandomStream,
    generation: int = 0,
    on_replacement: Optional[Callable[[Individual, Individual], None]] = None,
) -> list:
    """One deterministic-crowding step; returns the next population."""
    if len(population) % 2:
        raise InvalidArgumentError("population size must be even")
    current = list(population)
    _shuffle(current, rng)
    rate = params.mutation_rate(generation)
    next_population = []
    for i in range(0, len(current), 2):
        p1, p2 = current[i], current[i + 1]
        if rng.next_uniform() < params.p_crossover:
            g1, g2 = _crossover(p1.genome, p2.genome, params, rng)
        else:
            g1, g2 = p1.genome, p2.genome
        g1 = _mutate(g1, rate, rng)
        g2 = _mutate(g2, rate, rng)
        c1, c2 = evaluate(g1), evaluate(g2)

        straight = hamming_distance(p1.genome, c1.genome) + hamming_distance(
            p2.genome, c2.genome
        )
        crossed = hamming_distance(p1.genome, c2.genome) + hamming_distance(
            p2.genome, c1.genome
        )
        if straight <= crossed:
            matches = ((p1, c1), (p2, c2))
        else:
            matches = ((p1, c2), (p2, c1))
        for parent, child in matches:
            if child.fitness < parent.fitness or (
                child.fitness == parent.fitness
                and child.operator_count < parent.operator_count
            ):
                if on_replacement is not None:
                    on_replacement(parent, child)
                next_population.append(child)
            else:
                next_population.append(parent)
    return next_population


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    notation: str
    fitness: float
    p_re: float
    p_se: float
    p_fr: float


@dataclass(frozen=True)
class BestEntry:
    notation: str
    genome_hex: str
    fitness: float
    f1: float
    p_re: float
    p_se: float
    p_fr: float
    levels: int
    per_level: int


@dataclass(frozen=True)
class DesignReport:
    seed: int
    layout: GenomeLayout
    params: GaParams
    objective: ObjectiveConfig
    plan: SimulationPlan
    assay: AssayParams
    critical: CriticalErrors
    generation_log: tuple
    best: tuple

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "layout": {
                "q": self.layout.q,
                "optimize_levels": self.layout.optimize_levels,
                "optimize_per_level": self.layout.optimize_per_level,
                "fixed_levels": self.layout.fixed_levels,
                "fixed_per_level": self.layout.fixed_per_level,
            },
            "ga": {
                "population": self.params.population,
                "p_crossover": self.params.p_crossover,
                "mutation_schedule": [list(e) for e in self.params.mutation_schedule],
                "generations": self.params.generations,
                "crossover_kind": self.params.crossover_kind,
                "seed": self.params.seed,
                "fresh_seeds_per_generation": self.params.fresh_seeds_per_generation,
            },
            "objective": {
                "p_re_target": self.objective.p_re_target,
                "p_se_target": self.objective.p_se_target,
                "w_re": self.objective.w_re,
                "w_se": self.objective.w_se,
                "w_fr": self.objective.w_fr,
            },
            "plan": {
                "measurements_per_level": self.plan.measurements_per_level,
                "levels": self.plan.levels,
                "per_level_per_run": self.plan.per_level_per_run,
            },
            "assay": {
                "sd": self.assay.sd,
                "bias": self.assay.bias,
                "tea": self.assay.tea,
                "alpha": self.assay.alpha,
            },
            "critical": {
                "delta_se": self.critical.delta_se,
                "k_re": self.critical.k_re,
            },
            "generation_log": [
                {
                    "generation": r.generation,
                    "procedure": r.notation,
                    "f": r.fitness,
                    "p_re": r.p_re,
                    "p_se": r.p_se,
                    "p_fr": r.p_fr,
                }
                for r in self.generation_log
            ],
            "best": [
                {
                    "procedure": e.notation,
                    "genome": e.genome_hex,
                    "f": e.fitness,
                    "f1": e.f1,
                    "p_re": e.p_re,
                    "p_se": e.p_se,
                    "p_fr": e.p_fr,
                    "levels": e.levels,
                    "per_level": e.per_level,
                }
                for e in self.best
            ],
        }


def _random_genome(layout: GenomeLayout, rng: RandomStream) -> Genome:
    length = genome_length(layout)
    return Genome(tuple(1 if rng.next_uniform() < 0.5 else 0 for _ in range(length)), layout)


def _record(generation: int, best: Individual) -> GenerationRecord:
    procedure = decode(best.genome)
    est = best.estimate
    return GenerationRecord(
        generation=generation,
        notation=canonical_notation(procedure),
        fitness=best.fitness,
        p_re=est.p_re,
        p_se=est.p_se,
        p_fr=est.p_fr,
    )


def run_design(
    layout: GenomeLayout,
    plan: SimulationPlan,
    assay: AssayParams,
    cfg: ObjectiveConfig,
    params: GaParams,
    max_best: int = 10,
    on_replacement: Optional[Callable[[Individual, Individual], None]] = None,
) -> DesignReport:
    """Full design run: random initial population, crowding generations,
    and a report of the best procedures found (deduplicated by notation)."""
    critical = critical_errors(assay)
    ops_rng = new_stream(params.seed, _OPS_STREAM_ID)

    def make_evaluator(generation: int) -> PopulationEvaluator:
        if params.fresh_seeds_per_generation:
            sim = new_stream(
                params.seed, _FRESH_SIM_BASE + IDS_PER_SIMULATION * generation
            )
        else:
            sim = new_stream(params.seed, _SIM_STREAM_ID)
        return PopulationEvaluator(plan, critical, cfg, sim)

    evaluator = make_evaluator(0)
    genomes = [_random_genome(layout, ops_rng) for _ in range(params.population)]
    population = [evaluator.evaluate(g) for g in genomes]

    best_seen: dict = {}

    def note_best(individuals):
        for ind in individuals:
            notation = canonical_notation(decode(ind.genome))
            prev = best_seen.get(notation)
            if prev is None or ind.fitness < prev.fitness:
                best_seen[notation] = ind

    log = [_record(0, min(population, key=lambda ind: ind.fitness))]
    note_best(population)

    for generation in range(1, params.generations + 1):
        if params.fresh_seeds_per_generation:
            evaluator = make_evaluator(generation)
        population = crowding_generation(
            population,
            params,
            evaluator.evaluate,
            ops_rng,
            generation=generation,
            on_replacement=on_replacement,
        )
        note_best(population)
        log.append(_record(generation, min(population, key=lambda ind: ind.fitness)))

    ranked = sorted(
        best_seen.items(), key=lambda item: (item[1].fitness, item[0])
    )[:max_best]
    best_entries = []
    for notation, ind in ranked:
        procedure = decode(ind.genome)
        est = ind.estimate
        best_entries.append(
            BestEntry(
                notation=notation,
                genome_hex=ind.genome.to_hex(),
                fitness=ind.fitness,
                f1=comparison_f1(est),
                p_re=est.p_re,
                p_se=est.p_se,
                p_fr=est.p_fr,
                levels=procedure.levels if procedure.levels is not None else plan.levels,
                per_level=(
                    procedure.per_level
                    if procedure.per_level is not None
                    else plan.per_level_per_run
                ),
            )
        )

    return DesignReport(
        seed=params.seed,
        layout=layout,
        params=params,
        objective=cfg,
        plan=plan,
        assay=assay,
        critical=critical,
        generation_log=tuple(log),
        best=tuple(best_entries),
    )
