"""Batch command-line front end.

Commands: design, evaluate, compare, list-library, critical-errors.
Every report embeds the effective seed and configuration, so a report is
sufficient to reproduce itself. Exit codes: 0 success, 2 config error,
3 parse error, 4 runtime / infeasible assay.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import ga as ga_mod
from .config import JobConfig, load_config
from .error_model import critical_errors
from .errors import (
    ConfigError,
    InfeasibleAssayError,
    ProcedureParseError,
    QcDesignError,
)
from .library import builtin_library, load_library_file, parse_procedure
from .objective import comparison_f1, fitness_f
from .rng import new_stream
from .simulator import SimulationPlan, estimate_performance
from .stats import compare_procedures

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_RUNTIME = 4


def _apply_overrides(cfg: JobConfig, args) -> JobConfig:
    seed = args.seed
    if seed is None and "QCDESIGN_SEED" in os.environ:
        seed = int(os.environ["QCDESIGN_SEED"])
    if seed is not None:
        cfg.ga = ga_mod.GaParams(
            population=cfg.ga.population,
            p_crossover=cfg.ga.p_crossover,
            mutation_schedule=cfg.ga.mutation_schedule,
            generations=cfg.ga.generations,
            crossover_kind=cfg.ga.crossover_kind,
            seed=seed,
            fresh_seeds_per_generation=cfg.ga.fresh_seeds_per_generation,
        )
    threads = args.threads
    if threads is None and "QCDESIGN_THREADS" in os.environ:
        threads = int(os.environ["QCDESIGN_THREADS"])
    if threads is not None:
        if threads < 1:
            raise ConfigError("--threads must be >= 1")
        cfg.threads = threads
    if args.out is not None:
        cfg.output = args.out
    if args.format is not None:
        cfg.output_format = args.format
    return cfg


def _emit(cfg: JobConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_critical_errors(cfg: JobConfig) -> str:
    crit = critical_errors(cfg.assay)
    if cfg.output_format == "csv":
        return "k_re,delta_se\n" f"{crit.k_re:.3f},{crit.delta_se:.3f}\n"
    return _json_doc(
        {
            "assay": {
                "sd": cfg.assay.sd,
                "bias": cfg.assay.bias,
                "tea": cfg.assay.tea,
                "alpha": cfg.assay.alpha,
            },
            "critical_random_error": round(crit.k_re, 3),
            "critical_systematic_error": round(crit.delta_se, 3),
        }
    )


def _gather_library(cfg: JobConfig):
    entries = list(builtin_library())
    for path in cfg.library_files:
        entries.extend(load_library_file(path))
    return entries


def cmd_list_library(cfg: JobConfig) -> str:
    entries = _gather_library(cfg)
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "source", "note"])
        for e in entries:
            writer.writerow([e.name, e.source, e.note])
        return buf.getvalue()
    return _json_doc(
        {
            "entries": [
                {"name": e.name, "source": e.source, "note": e.note} for e in entries
            ]
        }
    )


def cmd_evaluate(cfg: JobConfig, procedure_text: str) -> str:
    procedure = parse_procedure(procedure_text)
    crit = critical_errors(cfg.assay)
    plan = SimulationPlan(
        measurements_per_level=cfg.plan.measurements_per_level,
        levels=cfg.plan.levels,
        per_level_per_run=cfg.plan.per_level_per_run,
        stream=new_stream(cfg.ga.seed, 0),
    )
    est = estimate_performance(procedure, plan, crit)
    f = fitness_f(est, cfg.objective)
    f1 = comparison_f1(est)
    if cfg.output_format == "csv":
        return (
            "procedure,p_re,p_se,p_fr,f,f1\n"
            f"{procedure_text},{est.p_re:.4f},{est.p_se:.4f},"
            f"{est.p_fr:.4f},{f:.5f},{f1:.5f}\n"
        )
    return _json_doc(
        {
            "procedure": procedure_text,
            "seed": cfg.ga.seed,
            "p_re": est.p_re,
            "p_se": est.p_se,
            "p_fr": est.p_fr,
            "f": f,
            "f1": f1,
            "runs_simulated": est.runs_simulated,
        }
    )


def cmd_compare(cfg: JobConfig, extra_procedures) -> str:
    named = [(e.name, e.procedure) for e in _gather_library(cfg)]
    for text in extra_procedures:
        named.append((text, parse_procedure(text)))
    if len(named) < 2:
        raise ConfigError("compare needs at least two procedures")
    crit = critical_errors(cfg.assay)
    result = compare_procedures(
        named,
        cfg.plan,
        crit,
        replicates=cfg.replicates,
        base_seed=cfg.ga.seed,
        threads=cfg.threads,
    )
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "procedure",
                "mean_p_re",
                "sd_p_re",
                "mean_p_se",
                "sd_p_se",
                "mean_p_fr",
                "sd_p_fr",
                "mean_f1",
                "sd_f1",
                "sign_p_vs_top",
            ]
        )
        for row in result.rows:
            writer.writerow(
                [
                    row.name,
                    f"{row.mean_p_re:.4f}",
                    f"{row.sd_p_re:.4f}",
                    f"{row.mean_p_se:.4f}",
                    f"{row.sd_p_se:.4f}",
                    f"{row.mean_p_fr:.4f}",
                    f"{row.sd_p_fr:.4f}",
                    f"{row.mean_f1:.4f}",
                    f"{row.sd_f1:.4f}",
                    "" if row.sign_p_vs_top is None else f"{row.sign_p_vs_top:.6g}",
                ]
            )
        return buf.getvalue()
    return _json_doc(
        {
            "base_seed": result.base_seed,
            "replicates": result.replicates,
            "rows": [
                {
                    "procedure": row.name,
                    "mean_p_re": row.mean_p_re,
                    "sd_p_re": row.sd_p_re,
                    "mean_p_se": row.mean_p_se,
                    "sd_p_se": row.sd_p_se,
                    "mean_p_fr": row.mean_p_fr,
                    "sd_p_fr": row.sd_p_fr,
                    "mean_f1": row.mean_f1,
                    "sd_f1": row.sd_f1,
                    "sign_p_vs_top": row.sign_p_vs_top,
                    "ties_only_vs_top": row.ties_only_vs_top,
                }
                for row in result.rows
            ],
        }
    )


def cmd_design(cfg: JobConfig) -> str:
    report = ga_mod.run_design(
        cfg.layout, cfg.plan, cfg.assay, cfg.objective, cfg.ga
    )
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["generation", "procedure", "f", "p_re", "p_se", "p_fr"])
        for rec in report.generation_log:
            writer.writerow(
                [
                    rec.generation,
                    rec.notation,
                    f"{rec.fitness:.5f}",
                    f"{rec.p_re:.4f}",
                    f"{rec.p_se:.4f}",
                    f"{rec.p_fr:.4f}",
                ]
            )
        return buf.getvalue()
    return _json_doc(report.to_dict())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcdesign",
        description="Design and compare statistical QC procedures.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON job configuration")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--threads", type=int, help="worker process bound")
    parser.add_argument("--out", metavar="PATH", help="write output to a file")
    parser.add_argument("--format", choices=["csv", "doc"], help="output format")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("design", help="run the genetic design search")
    p_eval = sub.add_parser("evaluate", help="estimate one procedure's performance")
    p_eval.add_argument("procedure", help="procedure notation (canonical or Westgard)")
    p_cmp = sub.add_parser("compare", help="replicated comparison against the library")
    p_cmp.add_argument(
        "procedures", nargs="*", help="extra procedures to include in the comparison"
    )
    sub.add_parser("list-library", help="list the reference library")
    sub.add_parser("critical-errors", help="print the assay's critical errors")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
        if args.command == "design":
            text = cmd_design(cfg)
        elif args.command == "evaluate":
            text = cmd_evaluate(cfg, args.procedure)
        elif args.command == "compare":
            text = cmd_compare(cfg, args.procedures)
        elif args.command == "list-library":
            text = cmd_list_library(cfg)
        else:
            text = cmd_critical_errors(cfg)
        _emit(cfg, text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProcedureParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleAssayError, QcDesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
