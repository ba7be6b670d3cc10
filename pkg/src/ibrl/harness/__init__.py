"""Experiment harness: configs, runners, CSV records, stats, and the CLI."""

from .acceptance import (
    CriterionResult,
    check_algebra_properties,
    check_classical_recovery,
    check_conditioning_oracle,
    check_ku_geometry,
    check_newcomb_curve,
    check_trap_bandit,
    run_all,
)
from .config import (
    DEFAULT_SEED,
    EXPERIMENTS,
    ExperimentConfig,
    check_settings,
    config_from_mapping,
    load_config,
    parse_config_text,
)
from .csvio import CSV_COLUMNS, emit_csv, read_records
from .runner import (
    AGENT_STREAM,
    BOOT_STREAM,
    DEFAULT_TRAP_ROSTER,
    DEFAULT_VALIDATE_PAIRS,
    ENV_STREAM,
    NewcombCellSummary,
    RunRecord,
    catastrophe_rates,
    classical_belief,
    derive_stream,
    final_cumulative_regrets,
    ku_corners,
    ku_knightian_belief,
    run_experiment,
    run_newcomb_sweep,
    trap_bayes_belief,
    trap_hypothesis_tables,
    trap_ib_belief,
    trap_model,
    trap_support,
)
from .serialize import serialize_infradistribution
from .stats import PercentileReport, bootstrap_percentiles, nearest_rank

__all__ = [
    "AGENT_STREAM",
    "BOOT_STREAM",
    "CSV_COLUMNS",
    "CriterionResult",
    "DEFAULT_SEED",
    "DEFAULT_TRAP_ROSTER",
    "DEFAULT_VALIDATE_PAIRS",
    "ENV_STREAM",
    "EXPERIMENTS",
    "ExperimentConfig",
    "NewcombCellSummary",
    "PercentileReport",
    "RunRecord",
    "bootstrap_percentiles",
    "catastrophe_rates",
    "check_algebra_properties",
    "check_classical_recovery",
    "check_conditioning_oracle",
    "check_ku_geometry",
    "check_newcomb_curve",
    "check_settings",
    "check_trap_bandit",
    "classical_belief",
    "config_from_mapping",
    "derive_stream",
    "emit_csv",
    "final_cumulative_regrets",
    "ku_corners",
    "ku_knightian_belief",
    "load_config",
    "nearest_rank",
    "parse_config_text",
    "read_records",
    "run_all",
    "run_experiment",
    "run_newcomb_sweep",
    "serialize_infradistribution",
    "trap_bayes_belief",
    "trap_hypothesis_tables",
    "trap_ib_belief",
    "trap_model",
    "trap_support",
]
