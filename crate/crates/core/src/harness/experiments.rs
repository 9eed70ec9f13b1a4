//! Monte Carlo soundness, message complexity and receipt forgery.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use super::config::ElectionConfig;
use super::run::{derive_rng, run_election, RunError, RunOutcome};
use crate::actors::poio::audit_poio_holds;
use crate::actors::tallier::swap_commitment;
use crate::actors::{AuditStrategy, Decision, PublicContext};
use crate::board::PartyId;
use crate::commit::{comm_vec, forge_rerand_witness, rerand, share_vote, VoteShare, VoteVector};
use crate::group::{Backend, PrimeGroup, Tiny23};
use crate::params::GroupParams;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("trials must be positive")]
    NoTrials,
    #[error("k must be at least 1")]
    BadK,
    #[error("receipt forgery needs the tiny_test backend (trapdoor required)")]
    NoTrapdoor,
    #[error("no cast ballot to forge")]
    NoBallot,
    #[error(transparent)]
    Run(#[from] RunError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SoundnessResult {
    pub k: u32,
    pub trials: u64,
    pub cheat_p: f64,
    /// Trials where the cast ballot was modified and no PoIO was produced.
    pub undetected: u64,
    /// Trials that ended with a valid PoIO.
    pub detected: u64,
    pub rate: f64,
    /// `(1 - p)^{k-1} · p`.
    pub expected: f64,
    /// Binomial standard deviation of the rate around `expected`.
    pub sigma: f64,
}

impl SoundnessResult {
    pub const CSV_HEADER: &'static str = "k,trials,cheat_p,undetected,detected,rate,expected,sigma";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6}",
            self.k, self.trials, self.cheat_p, self.undetected, self.detected, self.rate, self.expected, self.sigma
        )
    }
}

enum TrialEnd {
    Detected,
    CastModified,
    CastIntact,
}

/// One voter against one tallier that swaps with probability `cheat_p` in
/// every round, since it cannot tell audit rounds from the cast round.
fn soundness_trial<G: PrimeGroup>(ctx: &GroupParams<G>, k: u32, cheat_p: f64, seed: u64, trial: u64) -> TrialEnd {
    let mut rng = derive_rng(seed, "soundness", trial);
    let n = ctx.n_choices();
    let strategy = AuditStrategy::Fixed(k);
    let vote = VoteVector::<G>::one_hot(n, rng.gen_range(0..n));
    for round in 0.. {
        let secrets = share_vote(&vote, 1, &mut rng).expect("one-hot vote");
        let c = secrets.commitments(ctx).expect("dimensions match")[0];
        let rtilde = G::random_scalar(&mut rng);
        let cheat = rng.gen_bool(cheat_p);
        let base = if cheat { swap_commitment(ctx, &c) } else { c };
        let published = rerand(ctx, &base, &rtilde);
        match strategy.decide(round, &mut rng) {
            Decision::Audit => {
                if rerand(ctx, &c, &rtilde) != published {
                    return TrialEnd::Detected;
                }
            }
            Decision::Cast => {
                return if cheat { TrialEnd::CastModified } else { TrialEnd::CastIntact };
            }
        }
    }
    unreachable!("fixed strategy always casts")
}

pub fn audit_soundness_experiment(k: u32, trials: u64, seed: u64, cheat_p: f64) -> Result<SoundnessResult, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    if k == 0 {
        return Err(ExperimentError::BadK);
    }
    let params = crate::params::derive_params::<Tiny23>(2, super::run::DOMAIN_TAG).expect("tiny parameters");
    let (undetected, detected) = (0..trials)
        .into_par_iter()
        .map(|t| match soundness_trial(&params, k, cheat_p, seed, t) {
            TrialEnd::Detected => (0u64, 1u64),
            TrialEnd::CastModified => (1, 0),
            TrialEnd::CastIntact => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let expected = (1.0 - cheat_p).powi(k as i32 - 1) * cheat_p;
    let rate = undetected as f64 / trials as f64;
    Ok(SoundnessResult {
        k,
        trials,
        cheat_p,
        undetected,
        detected,
        rate,
        expected,
        sigma: (expected * (1.0 - expected) / trials as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n_t: usize,
    pub k: u32,
    pub n_v: usize,
    /// Largest per-voter message count in the run.
    pub voter_messages: u64,
    /// `3·k·n_t + n_t`.
    pub voter_bound: u64,
    /// Largest per-tallier total, including per-voter reveals.
    pub tallier_messages: u64,
    /// Largest per-tallier count of tallier-to-tallier messages.
    pub tallier_peer_messages: u64,
    pub accepted: bool,
}

impl ComplexityRow {
    pub const CSV_HEADER: &'static str =
        "n_t,k,n_v,voter_messages,voter_bound,tallier_messages,tallier_peer_messages,accepted";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n_t,
            self.k,
            self.n_v,
            self.voter_messages,
            self.voter_bound,
            self.tallier_messages,
            self.tallier_peer_messages,
            u8::from(self.accepted)
        )
    }
}

pub fn complexity_probe<G: PrimeGroup>(
    k: u32,
    n_ts: &[usize],
    n_v: usize,
    seed: u64,
) -> Result<Vec<ComplexityRow>, ExperimentError> {
    if k == 0 {
        return Err(ExperimentError::BadK);
    }
    n_ts.par_iter()
        .map(|&n_t| {
            let cfg = ElectionConfig::new(n_v as u32, n_t as u32, 2, G::BACKEND, seed).with_k(k);
            let out = run_election::<G>(&cfg)?;
            let m = &out.metrics;
            let voter_messages = (0..n_v as u32).map(|i| m.sent_by(PartyId::Voter(i))).max().unwrap_or(0);
            let tallier_messages = (0..n_t as u32).map(|j| m.sent_by(PartyId::Tallier(j))).max().unwrap_or(0);
            let tallier_peer_messages = m.peer_messages.values().copied().max().unwrap_or(0);
            Ok(ComplexityRow {
                n_t,
                k,
                n_v,
                voter_messages,
                voter_bound: 3 * u64::from(k) * n_t as u64 + n_t as u64,
                tallier_messages,
                tallier_peer_messages,
                accepted: m.verdict.as_ref().is_some_and(|v| v.is_accept()),
            })
        })
        .collect()
}

pub fn complexity_csv(rows: &[ComplexityRow]) -> String {
    let mut out = format!("{}\n", ComplexityRow::CSV_HEADER);
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForgeryResult {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub corrupted_trapdoor: bool,
}

impl ForgeryResult {
    pub const CSV_HEADER: &'static str = "trials,successes,rate,corrupted_trapdoor";

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.6},{}", self.trials, self.successes, self.rate, u8::from(self.corrupted_trapdoor))
    }
}

/// Offsets `λ_k` by `k + 1`, breaking every equivocation that moves one unit
/// of vote weight between two distinct choices.
pub fn corrupt_trapdoor<G: PrimeGroup>(params: &GroupParams<G>) -> GroupParams<G> {
    let mut p = params.clone();
    if let Some(td) = p.trapdoor.as_mut() {
        for (k, l) in td.lambdas.iter_mut().enumerate() {
            *l = *l + G::scalar_from_u64(k as u64 + 1);
        }
    }
    p
}

/// For random cast shares, claims a different vote opening and checks the
/// public re-randomized commitment against it.
///
/// The fake moves one unit of the real share from choice `a` to choice `b`,
/// with fresh randomness `r'`.
pub fn receipt_forgery_experiment(
    run: &RunOutcome<Tiny23>,
    trials: u64,
    seed: u64,
    corrupted: bool,
) -> Result<ForgeryResult, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let ctx: &PublicContext<Tiny23> = &run.ctx;
    if ctx.params.trapdoor.is_none() {
        return Err(ExperimentError::NoTrapdoor);
    }
    let forge_params = if corrupted { corrupt_trapdoor(&ctx.params) } else { ctx.params.clone() };
    let index = {
        let mut ix = crate::actors::BoardIndex::new(ctx.n_t());
        ix.update(&run.transcript.entries);
        ix
    };
    let ballots: Vec<(u32, u32)> = index.accepted();
    if ballots.is_empty() {
        return Err(ExperimentError::NoBallot);
    }
    let n = ctx.n_choices();
    let mut rng = derive_rng(seed, "forgery", 0);
    let mut successes = 0;
    for _ in 0..trials {
        let (voter, round) = ballots[rng.gen_range(0..ballots.len())];
        let j = rng.gen_range(0..ctx.n_t());
        let cast = run.voters[voter as usize].cast_material().ok_or(ExperimentError::NoBallot)?;
        let real_share = &cast.secrets.shares[j];
        let real_r = cast.secrets.randomness[j];
        let real_rtilde = run.talliers[j].held(voter).ok_or(ExperimentError::NoBallot)?.rtilde;
        let c_tilde = index.blinded(voter, round, j as u32).ok_or(ExperimentError::NoBallot)?;

        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n.max(2))) % n;
        let mut fake = VoteShare { coords: real_share.coords.clone() };
        fake.coords[a] = fake.coords[a] - Tiny23::one();
        fake.coords[b] = fake.coords[b] + Tiny23::one();
        let fake_r = Tiny23::random_scalar(&mut rng);
        let fake_rtilde = forge_rerand_witness(&forge_params, &fake, &fake_r, real_share, &real_r, &real_rtilde)
            .expect("tiny parameters carry a trapdoor");
        let claimed = comm_vec(&ctx.params, &fake, &fake_r).expect("dimensions match");
        if !audit_poio_holds(ctx, &claimed, c_tilde, &fake_rtilde) {
            successes += 1;
        }
    }
    Ok(ForgeryResult { trials, successes, rate: successes as f64 / trials as f64, corrupted_trapdoor: corrupted })
}

/// A small honest tiny-group election to forge against.
pub fn forgery_base_run(seed: u64) -> Result<RunOutcome<Tiny23>, ExperimentError> {
    let cfg = ElectionConfig::new(6, 2, 3, Backend::TinyTest, seed).with_k(2);
    Ok(run_election::<Tiny23>(&cfg)?)
}
