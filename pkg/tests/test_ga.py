"""Deterministic-crowding GA tests at desk scale."""

import pytest

from qcdesign.errors import InvalidArgumentError
from qcdesign.ga import (
    GaParams,
    Individual,
    crowding_generation,
    evaluate_population,
    run_design,
)
from qcdesign.genome import GenomeLayout, encode
from qcdesign.objective import ObjectiveConfig
from qcdesign.rng import new_stream
from qcdesign.rules import Procedure, Rule, RuleKind
from qcdesign.simulator import SimulationPlan

LAYOUT = GenomeLayout(q=3, optimize_levels=True)


def _params(**overrides):
    defaults = dict(population=20, generations=3, seed=12345)
    defaults.update(overrides)
    return GaParams(**defaults)


def test_params_validation():
    with pytest.raises(InvalidArgumentError):
        GaParams(population=21)
    with pytest.raises(InvalidArgumentError):
        GaParams(population=0)
    with pytest.raises(InvalidArgumentError):
        GaParams(p_crossover=1.5)
    with pytest.raises(InvalidArgumentError):
        GaParams(generations=-1)
    with pytest.raises(InvalidArgumentError):
        GaParams(crossover_kind="uniform")
    with pytest.raises(InvalidArgumentError):
        GaParams(mutation_schedule=((10, 0.1), (5, 0.2)))


def test_mutation_schedule_steps():
    params = GaParams(mutation_schedule=((0, 0.0), (50, 0.0005)))
    assert params.mutation_rate(0) == 0.0
    assert params.mutation_rate(49) == 0.0
    assert params.mutation_rate(50) == 0.0005
    assert params.mutation_rate(500) == 0.0005


def test_single_value_genome_fitness(sodium_critical, sodium_plan):
    genome = encode(
        Procedure((Rule(RuleKind.SINGLE_VALUE, 1, 2.4),), (), levels=2), LAYOUT
    )
    (individual,) = evaluate_population(
        [genome], sodium_plan, sodium_critical, ObjectiveConfig(), 12345
    )
    assert individual.fitness == pytest.approx(0.0375, abs=0.02)
    assert individual.operator_count == 0


def test_identical_children_keep_parents(sodium_critical, sodium_plan):
    genomes = [
        encode(Procedure((Rule(RuleKind.SINGLE_VALUE, 1, 2.0 + 0.1 * i),), (), levels=2), LAYOUT)
        for i in range(4)
    ]
    population = evaluate_population(
        genomes, sodium_plan, sodium_critical, ObjectiveConfig(), 12345
    )
    # without crossover or mutation every child equals a parent, so the
    # better-or-fewer-operators rule never replaces anyone
    next_population = crowding_generation(
        population,
        _params(population=4, p_crossover=0.0),
        lambda genome: next(i for i in population if i.genome == genome),
        new_stream(12345, 50),
    )
    assert sorted(i.genome.bits for i in next_population) == sorted(
        i.genome.bits for i in population
    )


def test_tiebreak_prefers_fewer_operators():
    # synthetic fitness landscape: everything ties, so the operator count
    # decides; build individuals by hand
    import itertools

    from qcdesign.genome import decode, genome_length
    from qcdesign.simulator import PerformanceEstimate

    est = PerformanceEstimate(0.5, 1.0, 0.0, 1000)

    def fake_evaluate(genome):
        return Individual(
            genome=genome,
            fitness=1.0,
            estimate=est,
            operator_count=decode(genome).operator_count,
        )

    ones = tuple(itertools.repeat(1, genome_length(LAYOUT)))
    from qcdesign.genome import Genome

    rich = fake_evaluate(Genome(ones, LAYOUT))  # three rules, two operators
    population = [rich, rich]
    replacements = []
    next_population = crowding_generation(
        population,
        _params(population=2, p_crossover=0.0, mutation_schedule=((0, 1.0),)),
        fake_evaluate,
        new_stream(1, 50),
        generation=0,
        on_replacement=lambda parent, child: replacements.append((parent, child)),
    )
    for parent, child in replacements:
        better = child.fitness < parent.fitness
        leaner = (
            child.fitness == parent.fitness
            and child.operator_count < parent.operator_count
        )
        assert better or leaner
    assert len(next_population) == 2


def test_odd_population_rejected(sodium_critical, sodium_plan):
    population = evaluate_population(
        [encode(Procedure(), LAYOUT)] * 3,
        sodium_plan,
        sodium_critical,
        ObjectiveConfig(),
        1,
    )
    with pytest.raises(InvalidArgumentError):
        crowding_generation(population, _params(), lambda g: None, new_stream(1, 50))


def test_zero_generations_report(sodium_assay, sodium_plan):
    report = run_design(
        LAYOUT, sodium_plan, sodium_assay, ObjectiveConfig(), _params(generations=0)
    )
    assert len(report.generation_log) == 1
    assert report.generation_log[0].generation == 0
    assert report.best


def test_design_run_is_deterministic(sodium_assay, sodium_plan):
    kwargs = dict(
        layout=LAYOUT,
        plan=sodium_plan,
        assay=sodium_assay,
        cfg=ObjectiveConfig(),
        params=_params(),
    )
    assert run_design(**kwargs).to_dict() == run_design(**kwargs).to_dict()


def test_best_fitness_monotone_under_common_random_numbers(sodium_assay, sodium_plan):
    report = run_design(
        LAYOUT, sodium_plan, sodium_assay, ObjectiveConfig(), _params(generations=5)
    )
    fits = [rec.fitness for rec in report.generation_log]
    assert all(later <= earlier for earlier, later in zip(fits, fits[1:]))


def test_fresh_seed_mode_runs(sodium_assay, sodium_plan):
    report = run_design(
        LAYOUT,
        sodium_plan,
        sodium_assay,
        ObjectiveConfig(),
        _params(generations=2, fresh_seeds_per_generation=True),
    )
    assert len(report.generation_log) == 3


def test_report_dict_shape(sodium_assay, sodium_plan):
    report = run_design(
        LAYOUT, sodium_plan, sodium_assay, ObjectiveConfig(), _params(generations=1)
    )
    doc = report.to_dict()
    assert doc["seed"] == 12345
    assert doc["critical"]["delta_se"] == pytest.approx(3.495, abs=0.001)
    assert {"procedure", "f", "f1", "genome"} <= set(doc["best"][0])
    assert len(doc["generation_log"]) == 2
