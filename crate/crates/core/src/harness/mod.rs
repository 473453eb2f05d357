//! Experiment driver: ensembles, configuration, registered experiments and
//! report emission.

pub mod config;
pub mod ensemble;
pub mod experiments;
pub mod report;

pub use config::ExperimentConfig;
pub use ensemble::{generate_forcing, sample_rng, EnsembleSpec};
pub use experiments::{
    configure_threads, experiment_by_name, experiments, run_consistency, run_convergence,
    run_kernel_suite, run_mre_experiment, run_proposition_checks, Experiment, ExperimentOutput,
    LevelMax, MreOutcome, Quarantine,
};
pub use report::{emit_reports, Record};
