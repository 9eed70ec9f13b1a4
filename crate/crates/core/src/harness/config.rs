//! Election and adversary configuration, read from TOML.
//!
//! ```toml
//! [election]
//! n_v = 100
//! n_t = 5
//! n_choices = 4
//! backend = "production"
//! seed = 1
//! weights = [0.4, 0.3, 0.2, 0.1]   # optional, uniform by default
//!
//! [audit]
//! strategy = "fixed"   # or "geometric"
//! k = 3
//! p = 0.5              # geometric only
//! timeout = 5
//!
//! [phases]
//! voting = 1
//! tally = 200
//! result = 220
//! verification = 240
//!
//! [adversary]
//! corrupted_talliers = [1]
//! tallier_policy = "always_swap_commitment"
//! swap_p = 0.5
//! corrupted_voters = [3]
//! voter_policy = "wrong_opening"
//! designated_policy = "honest"
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::actors::{AuditStrategy, DesignatedPolicy, TallierPolicy, VoterPolicy};
use crate::board::PhaseSchedule;
use crate::group::{Backend, PrimeGroup, Ristretto, Tiny23};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionSection {
    pub n_v: u32,
    pub n_t: u32,
    pub n_choices: u32,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

fn default_backend() -> Backend {
    Backend::Production
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Fixed,
    Geometric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSection {
    #[serde(default = "default_strategy")]
    pub strategy: StrategyKind,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_timeout")]
    pub timeout: u64,
}

fn default_strategy() -> StrategyKind {
    StrategyKind::Fixed
}
fn default_k() -> u32 {
    3
}
fn default_p() -> f64 {
    0.5
}
fn default_timeout() -> u64 {
    5
}

impl Default for AuditSection {
    fn default() -> Self {
        AuditSection { strategy: default_strategy(), k: default_k(), p: default_p(), timeout: default_timeout() }
    }
}

impl AuditSection {
    pub fn strategy(&self) -> AuditStrategy {
        match self.strategy {
            StrategyKind::Fixed => AuditStrategy::Fixed(self.k),
            StrategyKind::Geometric => AuditStrategy::Geometric(self.p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasesSection {
    pub voting: u64,
    pub tally: u64,
    pub result: u64,
    pub verification: u64,
}

impl Default for PhasesSection {
    fn default() -> Self {
        PhasesSection { voting: 1, tally: 200, result: 220, verification: 240 }
    }
}

impl PhasesSection {
    pub fn schedule(&self) -> PhaseSchedule {
        PhaseSchedule { voting: self.voting, tally: self.tally, result: self.result, verification: self.verification }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TallierPolicyName {
    Honest,
    AlwaysSwapCommitment,
    WrongAuditReveal,
    WrongAggregate,
    Silent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoterPolicyName {
    Honest,
    InvalidVoteGarbageProof,
    WrongOpening,
    DoubleVoteAttempt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignatedPolicyName {
    Honest,
    WrongWinner,
    WrongRtilde,
}

/// Static corruption, fixed before the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversaryConfig {
    #[serde(default)]
    pub corrupted_talliers: BTreeSet<u32>,
    #[serde(default = "tallier_honest")]
    pub tallier_policy: TallierPolicyName,
    /// Per-round swap probability for `always_swap_commitment`.
    #[serde(default = "swap_p")]
    pub swap_p: f64,
    #[serde(default)]
    pub corrupted_voters: BTreeSet<u32>,
    #[serde(default = "voter_honest")]
    pub voter_policy: VoterPolicyName,
    #[serde(default = "designated_honest")]
    pub designated_policy: DesignatedPolicyName,
}

fn tallier_honest() -> TallierPolicyName {
    TallierPolicyName::Honest
}
fn voter_honest() -> VoterPolicyName {
    VoterPolicyName::Honest
}
fn designated_honest() -> DesignatedPolicyName {
    DesignatedPolicyName::Honest
}
fn swap_p() -> f64 {
    1.0
}

impl Default for AdversaryConfig {
    fn default() -> Self {
        AdversaryConfig {
            corrupted_talliers: BTreeSet::new(),
            tallier_policy: TallierPolicyName::Honest,
            swap_p: swap_p(),
            corrupted_voters: BTreeSet::new(),
            voter_policy: VoterPolicyName::Honest,
            designated_policy: DesignatedPolicyName::Honest,
        }
    }
}

impl AdversaryConfig {
    pub fn honest() -> Self {
        Self::default()
    }

    pub fn tallier_policy(&self, j: u32) -> TallierPolicy {
        if !self.corrupted_talliers.contains(&j) {
            return TallierPolicy::Honest;
        }
        match self.tallier_policy {
            TallierPolicyName::Honest => TallierPolicy::Honest,
            TallierPolicyName::AlwaysSwapCommitment => TallierPolicy::AlwaysSwap { p: self.swap_p },
            TallierPolicyName::WrongAuditReveal => TallierPolicy::WrongAuditReveal,
            TallierPolicyName::WrongAggregate => TallierPolicy::WrongAggregate,
            TallierPolicyName::Silent => TallierPolicy::Silent,
        }
    }

    pub fn voter_policy(&self, i: u32) -> VoterPolicy {
        if !self.corrupted_voters.contains(&i) {
            return VoterPolicy::Honest;
        }
        match self.voter_policy {
            VoterPolicyName::Honest => VoterPolicy::Honest,
            VoterPolicyName::InvalidVoteGarbageProof => VoterPolicy::InvalidVoteGarbageProof,
            VoterPolicyName::WrongOpening => VoterPolicy::WrongOpening,
            VoterPolicyName::DoubleVoteAttempt => VoterPolicy::DoubleVoteAttempt,
        }
    }

    pub fn designated_policy(&self) -> DesignatedPolicy {
        match self.designated_policy {
            DesignatedPolicyName::Honest => DesignatedPolicy::Honest,
            DesignatedPolicyName::WrongWinner => DesignatedPolicy::WrongWinner,
            DesignatedPolicyName::WrongRtilde => DesignatedPolicy::WrongRtilde,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionConfig {
    pub election: ElectionSection,
    #[serde(default)]
    pub audit: AuditSection,
    #[serde(default)]
    pub phases: PhasesSection,
    #[serde(default)]
    pub adversary: AdversaryConfig,
}

impl ElectionConfig {
    pub fn new(n_v: u32, n_t: u32, n_choices: u32, backend: Backend, seed: u64) -> Self {
        ElectionConfig {
            election: ElectionSection { n_v, n_t, n_choices, backend, seed, weights: None },
            audit: AuditSection::default(),
            phases: PhasesSection::default(),
            adversary: AdversaryConfig::default(),
        }
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.audit.strategy = StrategyKind::Fixed;
        self.audit.k = k;
        self
    }

    pub fn with_adversary(mut self, adv: AdversaryConfig) -> Self {
        self.adversary = adv;
        self
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ElectionConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Digest of the canonical serialization; recorded in the genesis entry.
    pub fn digest(&self) -> [u8; 32] {
        crate::hash::digest(b"ace/config/v1", self.to_toml().as_bytes())
    }

    pub fn weights(&self) -> Vec<f64> {
        let n = self.election.n_choices as usize;
        self.election.weights.clone().unwrap_or_else(|| vec![1.0 / n as f64; n])
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let e = &self.election;
        if e.n_t == 0 {
            return invalid("n_t must be at least 1");
        }
        if e.n_choices == 0 {
            return invalid("n_choices must be at least 1");
        }
        let q = match e.backend {
            Backend::Production => Ristretto::order_u64(),
            Backend::TinyTest => Tiny23::order_u64(),
        };
        if let Some(q) = q {
            if u64::from(e.n_v) >= q {
                return invalid(format!("n_v = {} must be below the group order {q}", e.n_v));
            }
        }
        if let Some(w) = &e.weights {
            if w.len() != e.n_choices as usize {
                return invalid("weights must have one entry per choice");
            }
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return invalid("weights must be non-negative and sum to 1");
            }
        }
        match self.audit.strategy {
            StrategyKind::Fixed if self.audit.k == 0 => return invalid("k must be at least 1"),
            StrategyKind::Geometric if !(self.audit.p > 0.0 && self.audit.p <= 1.0) => {
                return invalid("geometric p must be in (0, 1]")
            }
            _ => {}
        }
        if self.audit.timeout == 0 {
            return invalid("audit timeout must be positive");
        }
        if !self.phases.schedule().is_monotone() || self.phases.voting == 0 {
            return invalid("phase ticks must be increasing and start after setup");
        }
        let adv = &self.adversary;
        if adv.corrupted_talliers.iter().any(|j| *j >= e.n_t) {
            return invalid("corrupted tallier index out of range");
        }
        if adv.corrupted_voters.iter().any(|i| *i >= e.n_v) {
            return invalid("corrupted voter index out of range");
        }
        if !(0.0..=1.0).contains(&adv.swap_p) {
            return invalid("swap_p must be a probability");
        }
        Ok(())
    }
}
