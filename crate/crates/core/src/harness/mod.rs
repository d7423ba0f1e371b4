//! Experiment plumbing: configuration, campaigns, oracle, rendering, probes.

mod config;
mod experiment;
mod oracle;
mod probe;
mod render;
mod report;

pub use config::{
    load_config, parse_config, Algorithm, AlgorithmSettings, ExperimentConfig, ObjectiveSpec,
};
pub use experiment::{
    execute, hyperparameters_text, random_search, run_algorithm, run_experiment, run_file_stem,
    write_outputs, Campaign, CellResult,
};
pub use oracle::{oracle_bruteforce, ORACLE_MAX_DIM};
pub use probe::{eval_count_probe, expected_requests, ProbeRow};
pub use render::{grid_text, render_grid, render_svg, shape_for};
pub use report::{median, ComparisonReport, ReportRow};
