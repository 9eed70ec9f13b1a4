//! Single-field transcript tampers for negative testing of the judge.
//!
//! Edited entries are re-signed with the original appender's key and the
//! chain is resealed, so each tamper reaches the semantic check it targets
//! instead of tripping the signature or hash checks first. The exception is
//! `BreakHashChain`, which exists to trip exactly that.

use std::fmt;
use std::str::FromStr;

use super::run::Keyring;
use crate::actors::{judge_verify, JudgeReport};
use crate::board::{signing_message, Body, Transcript, Validity};
use crate::group::PrimeGroup;
use crate::sig::sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    FlipWinner,
    AlterBlindedCommitment,
    DropValiditySignature,
    DuplicateCast,
    SwapRtildeTotal,
    CorruptProofVote,
    CorruptProofResult,
    BreakHashChain,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MutationError {
    #[error("unknown mutation {0:?}")]
    Unknown(String),
    #[error("transcript has no entry that {0} can modify")]
    NotApplicable(Mutation),
}

impl Mutation {
    pub const ALL: [Mutation; 8] = [
        Mutation::FlipWinner,
        Mutation::AlterBlindedCommitment,
        Mutation::DropValiditySignature,
        Mutation::DuplicateCast,
        Mutation::SwapRtildeTotal,
        Mutation::CorruptProofVote,
        Mutation::CorruptProofResult,
        Mutation::BreakHashChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::FlipWinner => "flip_winner",
            Mutation::AlterBlindedCommitment => "alter_blinded_commitment",
            Mutation::DropValiditySignature => "drop_validity_signature",
            Mutation::DuplicateCast => "duplicate_cast",
            Mutation::SwapRtildeTotal => "swap_rtilde_total",
            Mutation::CorruptProofVote => "corrupt_proof_vote",
            Mutation::CorruptProofResult => "corrupt_proof_result",
            Mutation::BreakHashChain => "break_hash_chain",
        }
    }

    /// The blame class (see [`crate::actors::Blame::class`]) the judge must assign.
    pub fn expected_blame(self) -> &'static str {
        match self {
            Mutation::FlipWinner | Mutation::SwapRtildeTotal | Mutation::CorruptProofResult => "designated",
            Mutation::AlterBlindedCommitment | Mutation::DropValiditySignature | Mutation::CorruptProofVote => "tallier",
            Mutation::DuplicateCast | Mutation::BreakHashChain => "board",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = MutationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| MutationError::Unknown(s.to_string()))
    }
}

fn resign<G: PrimeGroup>(t: &mut Transcript<G>, idx: usize, keys: &Keyring<G>) {
    let eid = t.params().expect("genesis").election_id;
    let e = &mut t.entries[idx];
    let kp = keys.key_for(e.appender).expect("appender on the roll");
    e.signature = sign(kp, &signing_message(&eid, e.appender, &e.body));
}

fn find<G: PrimeGroup>(t: &Transcript<G>, m: Mutation, pred: impl Fn(&Body<G>) -> bool) -> Result<usize, MutationError> {
    t.entries.iter().position(|e| pred(&e.body)).ok_or(MutationError::NotApplicable(m))
}

pub fn apply_mutation<G: PrimeGroup>(
    t: &Transcript<G>,
    m: Mutation,
    keys: &Keyring<G>,
) -> Result<Transcript<G>, MutationError> {
    let mut t = t.clone();
    let n_choices = t.params().map(|p| p.n_choices).unwrap_or(1);
    match m {
        Mutation::FlipWinner => {
            let i = find(&t, m, |b| matches!(b, Body::Result(_)))?;
            if let Body::Result(r) = &mut t.entries[i].body {
                r.winner = (r.winner + 1) % n_choices.max(2);
            }
            resign(&mut t, i, keys);
        }
        Mutation::SwapRtildeTotal => {
            let i = find(&t, m, |b| matches!(b, Body::Result(_)))?;
            if let Body::Result(r) = &mut t.entries[i].body {
                r.rtilde_total = r.rtilde_total + G::one();
            }
            resign(&mut t, i, keys);
        }
        Mutation::CorruptProofResult => {
            let i = find(&t, m, |b| matches!(b, Body::Result(_)))?;
            if let Body::Result(r) = &mut t.entries[i].body {
                r.proof.link_proof.resp_r = r.proof.link_proof.resp_r + G::one();
            }
            resign(&mut t, i, keys);
        }
        Mutation::AlterBlindedCommitment => {
            let accepted: Vec<(u32, u32)> = t
                .entries
                .iter()
                .filter_map(|e| match &e.body {
                    Body::VoteValidity { voter, round, outcome: Validity::Accepted { .. } } => Some((*voter, *round)),
                    _ => None,
                })
                .collect();
            let i = find(&t, m, |b| {
                matches!(b, Body::BlindedCommitment { voter, round, .. } if accepted.contains(&(*voter, *round)))
            })?;
            let h = crate::params::derive_params::<G>(n_choices as usize, &t.params().expect("genesis").domain_tag)
                .map_err(|_| MutationError::NotApplicable(m))?
                .h;
            if let Body::BlindedCommitment { blinded, .. } = &mut t.entries[i].body {
                blinded.0 = G::op(&blinded.0, &h);
            }
            resign(&mut t, i, keys);
        }
        Mutation::DropValiditySignature => {
            let i = find(&t, m, |b| matches!(b, Body::VoteValidity { outcome: Validity::Accepted { .. }, .. }))?;
            if let Body::VoteValidity { outcome: Validity::Accepted { signatures, .. }, .. } = &mut t.entries[i].body {
                signatures.pop();
            }
            resign(&mut t, i, keys);
        }
        Mutation::CorruptProofVote => {
            let i = find(&t, m, |b| matches!(b, Body::VoteValidity { outcome: Validity::Rejected(_), .. }))?;
            if let Body::VoteValidity { outcome: Validity::Rejected(nizk), .. } = &mut t.entries[i].body {
                nizk.proof.sum_proof.response = nizk.proof.sum_proof.response + G::one();
            }
            resign(&mut t, i, keys);
        }
        Mutation::DuplicateCast => {
            let i = find(&t, m, |b| matches!(b, Body::CastFinal { .. }))?;
            let copy = t.entries[i].clone();
            t.entries.insert(i + 1, copy);
        }
        Mutation::BreakHashChain => {
            if t.entries.len() < 2 {
                return Err(MutationError::NotApplicable(m));
            }
            let i = t.entries.len() / 2;
            t.entries[i].prev_hash[0] ^= 1;
            return Ok(t);
        }
    }
    t.reseal();
    Ok(t)
}

pub fn mutate_and_judge<G: PrimeGroup>(
    t: &Transcript<G>,
    m: Mutation,
    keys: &Keyring<G>,
) -> Result<JudgeReport, MutationError> {
    Ok(judge_verify(&apply_mutation(t, m, keys)?))
}
