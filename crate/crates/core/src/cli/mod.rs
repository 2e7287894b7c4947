//! Configuration-driven experiment runner behind the `evidence-lab` binary.

mod config;
mod output;
mod runner;

pub use config::{parse_config, BayesSpec, ExperimentConfig, HypothesesSpec, WithinSpec};
pub use output::{convergence_csv, emit_convergence_csv, format_sig9, write_atomic, CSV_HEADER};
pub use runner::{
    execute, exit_code_for, limit_for, load_config, resolve_seed, run_experiment, MeasureVerdict,
    RunOptions, RunReport, ScenarioResult, SeedSource, DEFAULT_OUT_DIR, EXIT_INCONCLUSIVE,
    EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, SCHEMA_VERSION, SEED_ENV,
};
