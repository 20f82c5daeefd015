"""Job configuration: JSON file with sections mirroring the run inputs.

All defaults reproduce the sodium-assay application at full scale, so an
empty config file is a complete, meaningful job. Unknown keys are
rejected to catch typos early.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .error_model import AssayParams
from .errors import ConfigError
from .ga import GaParams
from .genome import GenomeLayout
from .objective import ObjectiveConfig
from .simulator import SimulationPlan

DEFAULT_SEED = 12345


@dataclass
class JobConfig:
    assay: AssayParams
    objective: ObjectiveConfig
    ga: GaParams
    plan: SimulationPlan
    layout: GenomeLayout
    library_files: tuple = ()
    output: Optional[str] = None
    output_format: str = "doc"  # "csv" or "doc"
    replicates: int = 21
    threads: int = 1


def default_config() -> JobConfig:
    return JobConfig(
        assay=AssayParams(sd=0.67, bias=0.1, tea=4.0, alpha=0.01),
        objective=ObjectiveConfig(),
        ga=GaParams(seed=DEFAULT_SEED),
        plan=SimulationPlan(measurements_per_level=1000, levels=2, per_level_per_run=1),
        layout=GenomeLayout(q=3, optimize_levels=True, fixed_per_level=1),
    )


def _section(data: dict, name: str, allowed: set) -> dict:
    raw = data.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be an object")
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in section {name!r}: {', '.join(sorted(unknown))}"
        )
    return raw


def load_config(path: Optional[str] = None) -> JobConfig:
    """Load a JSON config file over the defaults; ``None`` loads defaults."""
    cfg = default_config()
    if path is None:
        return cfg
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")

    known_sections = {
        "assay",
        "objective",
        "ga",
        "plan",
        "layout",
        "library_files",
        "output",
        "output_format",
        "replicates",
        "threads",
    }
    unknown = set(data) - known_sections
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    try:
        assay_raw = _section(data, "assay", {"sd", "bias", "tea", "alpha"})
        cfg.assay = AssayParams(
            sd=assay_raw.get("sd", cfg.assay.sd),
            bias=assay_raw.get("bias", cfg.assay.bias),
            tea=assay_raw.get("tea", cfg.assay.tea),
            alpha=assay_raw.get("alpha", cfg.assay.alpha),
        )
        obj_raw = _section(
            data, "objective", {"p_re_target", "p_se_target", "w_re", "w_se", "w_fr"}
        )
        cfg.objective = ObjectiveConfig(
            p_re_target=obj_raw.get("p_re_target", cfg.objective.p_re_target),
            p_se_target=obj_raw.get("p_se_target", cfg.objective.p_se_target),
            w_re=obj_raw.get("w_re", cfg.objective.w_re),
            w_se=obj_raw.get("w_se", cfg.objective.w_se),
            w_fr=obj_raw.get("w_fr", cfg.objective.w_fr),
        )
        ga_raw = _section(
            data,
            "ga",
            {
                "population",
                "p_crossover",
                "mutation_schedule",
                "generations",
                "crossover_kind",
                "seed",
                "fresh_seeds_per_generation",
            },
        )
        schedule = ga_raw.get(
            "mutation_schedule", [list(e) for e in cfg.ga.mutation_schedule]
        )
        cfg.ga = GaParams(
            population=ga_raw.get("population", cfg.ga.population),
            p_crossover=ga_raw.get("p_crossover", cfg.ga.p_crossover),
            mutation_schedule=tuple(tuple(e) for e in schedule),
            generations=ga_raw.get("generations", cfg.ga.generations),
            crossover_kind=ga_raw.get("crossover_kind", cfg.ga.crossover_kind),
            seed=ga_raw.get("seed", cfg.ga.seed),
            fresh_seeds_per_generation=ga_raw.get(
                "fresh_seeds_per_generation", cfg.ga.fresh_seeds_per_generation
            ),
        )
        plan_raw = _section(
            data, "plan", {"measurements_per_level", "levels", "per_level_per_run"}
        )
        cfg.plan = SimulationPlan(
            measurements_per_level=plan_raw.get(
                "measurements_per_level", cfg.plan.measurements_per_level
            ),
            levels=plan_raw.get("levels", cfg.plan.levels),
            per_level_per_run=plan_raw.get(
                "per_level_per_run", cfg.plan.per_level_per_run
            ),
        )
        layout_raw = _section(
            data,
            "layout",
            {
                "q",
                "optimize_levels",
                "optimize_per_level",
                "fixed_levels",
                "fixed_per_level",
            },
        )
        cfg.layout = GenomeLayout(
            q=layout_raw.get("q", cfg.layout.q),
            optimize_levels=layout_raw.get("optimize_levels", cfg.layout.optimize_levels),
            optimize_per_level=layout_raw.get(
                "optimize_per_level", cfg.layout.optimize_per_level
            ),
            fixed_levels=layout_raw.get("fixed_levels", cfg.layout.fixed_levels),
            fixed_per_level=layout_raw.get(
                "fixed_per_level", cfg.layout.fixed_per_level
            ),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    files = data.get("library_files", [])
    if not isinstance(files, list) or not all(isinstance(f, str) for f in files):
        raise ConfigError("library_files must be a list of paths")
    cfg.library_files = tuple(files)
    cfg.output = data.get("output", cfg.output)
    cfg.output_format = data.get("output_format", cfg.output_format)
    if cfg.output_format not in ("csv", "doc"):
        raise ConfigError(f"output_format must be 'csv' or 'doc', got {cfg.output_format!r}")
    cfg.replicates = data.get("replicates", cfg.replicates)
    cfg.threads = data.get("threads", cfg.threads)
    if not isinstance(cfg.replicates, int) or cfg.replicates < 2:
        raise ConfigError("replicates must be an integer >= 2")
    if not isinstance(cfg.threads, int) or cfg.threads < 1:
        raise ConfigError("threads must be an integer >= 1")
    return cfg
