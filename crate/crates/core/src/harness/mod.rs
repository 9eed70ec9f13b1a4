//! Simulated elections, experiments and transcript tampering.

pub mod config;
pub mod experiments;
pub mod metrics;
pub mod mutation;
pub mod oracle;
pub mod run;
pub mod taint;

pub use config::{
    AdversaryConfig, ConfigError, DesignatedPolicyName, ElectionConfig, StrategyKind, TallierPolicyName,
    VoterPolicyName,
};
pub use experiments::{
    audit_soundness_experiment, complexity_csv, complexity_probe, forgery_base_run, receipt_forgery_experiment,
    ComplexityRow, ExperimentError, ForgeryResult, SoundnessResult,
};
pub use metrics::{OracleTally, Rejection, RunMetrics};
pub use mutation::{apply_mutation, mutate_and_judge, Mutation, MutationError};
pub use oracle::plaintext_oracle;
pub use run::{derive_rng, run_election, Keyring, RunError, RunOutcome, DOMAIN_TAG};
pub use taint::{one_honest_tallier_run, taint_check, TaintReport};
