//! `ace`: run simulated elections, verify transcripts, stage attacks and
//! print experiment tables.
//!
//! Exit codes: 0 the judge accepts, 1 the judge rejects, 2 usage, I/O or
//! config error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ace_core::actors::{judge_verify, Verdict};
use ace_core::board::{parse_any, AnyTranscript, Transcript};
use ace_core::group::{Backend, PrimeGroup, Ristretto, Tiny23};
use ace_core::harness::{
    apply_mutation, audit_soundness_experiment, complexity_csv, complexity_probe, forgery_base_run,
    receipt_forgery_experiment, run_election, AdversaryConfig, DesignatedPolicyName, ElectionConfig, ForgeryResult,
    Mutation, RunOutcome, SoundnessResult, TallierPolicyName, VoterPolicyName,
};
use clap::{Parser, Subcommand};

const TRANSCRIPT_FILE: &str = "transcript.ace";
const METRICS_FILE: &str = "metrics.csv";

#[derive(Parser)]
#[command(name = "ace", version, about = "Audit-or-cast election runner and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an election from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Judge a transcript file.
    Verify { transcript: PathBuf },
    /// Run an adversarial policy or a transcript tamper.
    Attack {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print an experiment table as CSV.
    Stats {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Undetected-cheat rate of a per-round coin-flipping tallier.
    AuditSoundness {
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-round cheating probability.
        #[arg(long, default_value_t = 0.5)]
        cheat_p: f64,
    },
    /// Message counts over n_t in {1, 3, 5, 10}.
    Complexity {
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_v: usize,
    },
    /// Trapdoor equivocation of cast shares on the tiny group.
    ReceiptForgery {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use a deliberately wrong trapdoor (negative control).
        #[arg(long)]
        corrupt_trapdoor: bool,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed } => cmd_run(&config, &out, seed, None),
        Command::Verify { transcript } => cmd_verify(&transcript),
        Command::Attack { scenario, config, out, seed } => cmd_run(&config, &out, seed, Some(&scenario)),
        Command::Stats { experiment } => cmd_stats(experiment).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn report(verdict: &Verdict) -> bool {
    println!("{verdict}");
    verdict.is_accept()
}

enum Scenario {
    Policy(AdversaryConfig),
    Tamper(Mutation),
}

/// Maps a scenario name onto the config. A policy without corrupted parties
/// in the config corrupts tallier 1 (or 0), voter 0, or the designated tallier.
fn scenario(name: &str, cfg: &ElectionConfig) -> Result<Scenario, Failure> {
    if let Ok(m) = name.parse::<Mutation>() {
        return Ok(Scenario::Tamper(m));
    }
    let mut adv = cfg.adversary.clone();
    let default_tallier = 1.min(cfg.election.n_t - 1);
    let tallier = |adv: &mut AdversaryConfig, p| {
        adv.tallier_policy = p;
        if adv.corrupted_talliers.is_empty() {
            adv.corrupted_talliers.insert(default_tallier);
        }
    };
    let voter = |adv: &mut AdversaryConfig, p| {
        adv.voter_policy = p;
        if adv.corrupted_voters.is_empty() {
            adv.corrupted_voters.insert(0);
        }
    };
    match name {
        "always_swap_commitment" => tallier(&mut adv, TallierPolicyName::AlwaysSwapCommitment),
        "wrong_audit_reveal" => tallier(&mut adv, TallierPolicyName::WrongAuditReveal),
        "wrong_aggregate" => tallier(&mut adv, TallierPolicyName::WrongAggregate),
        "silent" => tallier(&mut adv, TallierPolicyName::Silent),
        "invalid_vote_garbage_proof" => voter(&mut adv, VoterPolicyName::InvalidVoteGarbageProof),
        "wrong_opening" => voter(&mut adv, VoterPolicyName::WrongOpening),
        "double_vote_attempt" => voter(&mut adv, VoterPolicyName::DoubleVoteAttempt),
        "wrong_winner" => adv.designated_policy = DesignatedPolicyName::WrongWinner,
        "wrong_rtilde" => adv.designated_policy = DesignatedPolicyName::WrongRtilde,
        _ => return Err(Failure(format!("unknown scenario {name:?}"))),
    }
    Ok(Scenario::Policy(adv))
}

fn cmd_run(config: &Path, out: &Path, seed: Option<u64>, attack: Option<&str>) -> Result<bool, Failure> {
    let mut cfg = ElectionConfig::load(config)?;
    if let Some(s) = seed {
        cfg.election.seed = s;
    }
    let tamper = match attack.map(|name| scenario(name, &cfg)).transpose()? {
        Some(Scenario::Policy(adv)) => {
            cfg.adversary = adv;
            None
        }
        Some(Scenario::Tamper(m)) => {
            // A garbage ballot gives the proof tamper a ProofVote to work on.
            if m == Mutation::CorruptProofVote && cfg.election.n_v >= 2 {
                cfg.adversary.corrupted_voters.insert(0);
                cfg.adversary.voter_policy = VoterPolicyName::InvalidVoteGarbageProof;
            }
            Some(m)
        }
        None => None,
    };
    cfg.validate()?;
    fs::create_dir_all(out)?;
    match cfg.election.backend {
        Backend::Production => run_and_write::<Ristretto>(&cfg, out, tamper),
        Backend::TinyTest => run_and_write::<Tiny23>(&cfg, out, tamper),
    }
}

fn run_and_write<G: PrimeGroup>(cfg: &ElectionConfig, out: &Path, tamper: Option<Mutation>) -> Result<bool, Failure> {
    let run: RunOutcome<G> = run_election::<G>(cfg)?;
    let transcript = match tamper {
        Some(m) => apply_mutation(&run.transcript, m, &run.keyring)?,
        None => run.transcript.clone(),
    };
    transcript.persist(&out.join(TRANSCRIPT_FILE))?;
    fs::write(out.join(METRICS_FILE), run.metrics.messages_csv())?;
    let m = &run.metrics;
    println!("entries={} rejections={} poios={}", transcript.entries.len(), m.rejections.len(), m.poios.len());
    let verdict = judge_verify(&transcript).verdict;
    Ok(report(&verdict))
}

fn judge_any<G: PrimeGroup>(t: &Transcript<G>) -> bool {
    report(&judge_verify(t).verdict)
}

fn cmd_verify(path: &Path) -> Result<bool, Failure> {
    Ok(match parse_any(path)? {
        AnyTranscript::Production(t) => judge_any(&t),
        AnyTranscript::TinyTest(t) => judge_any(&t),
    })
}

fn cmd_stats(experiment: Experiment) -> Result<(), Failure> {
    match experiment {
        Experiment::AuditSoundness { k, trials, seed, cheat_p } => {
            if !(0.0..=1.0).contains(&cheat_p) {
                return Err(Failure("cheat-p must be a probability".into()));
            }
            let r = audit_soundness_experiment(k, trials, seed, cheat_p)?;
            println!("{}\n{}", SoundnessResult::CSV_HEADER, r.csv_row());
        }
        Experiment::Complexity { k, seed, n_v } => {
            let rows = complexity_probe::<Ristretto>(k, &[1, 3, 5, 10], n_v, seed)?;
            print!("{}", complexity_csv(&rows));
        }
        Experiment::ReceiptForgery { trials, seed, corrupt_trapdoor } => {
            let run = forgery_base_run(seed)?;
            let r = receipt_forgery_experiment(&run, trials, seed, corrupt_trapdoor)?;
            println!("{}\n{}", ForgeryResult::CSV_HEADER, r.csv_row());
        }
    }
    Ok(())
}
