//! Public checks of dispute evidence. Every function here reads only signed
//! data and board contents.

use super::judge::Blame;
use super::messages::{aggregate_message, decision_message, opening_message, reveal_message, share_message};
use super::view::{BoardIndex, PublicContext};
use crate::board::{PartyId, Poio, PoioNizk};
use crate::commit::{comm_vec, rerand, Commitment};
use crate::group::PrimeGroup;
use crate::sig::verify_sig;
use crate::zk::verify_vote;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoioFinding {
    /// The evidence holds against the named party.
    Valid(Blame),
    Invalid(String),
}

/// The Def. PoIO inequality: `c̃ ≠ c · h^{r̃}`.
pub fn audit_poio_holds<G: PrimeGroup>(
    ctx: &PublicContext<G>,
    c: &Commitment<G>,
    c_tilde: &Commitment<G>,
    rtilde: &G::Scalar,
) -> bool {
    rerand(&ctx.params, c, rtilde) != *c_tilde
}

fn invalid(why: &str) -> PoioFinding {
    PoioFinding::Invalid(why.to_string())
}

fn tallier_pk<G: PrimeGroup>(ctx: &PublicContext<G>, j: u32) -> Option<&G::Element> {
    ctx.record.tallier_pks.get(j as usize)
}

fn voter_pk<G: PrimeGroup>(ctx: &PublicContext<G>, i: u32) -> Option<&G::Element> {
    ctx.record.voter_pks.get(i as usize)
}

pub fn verify_poio<G: PrimeGroup>(ctx: &PublicContext<G>, index: &BoardIndex<G>, poio: &Poio<G>) -> PoioFinding {
    let eid = ctx.election_id();
    match poio {
        Poio::AuditMismatch { voter, tallier, round, commitment, rtilde, reveal_sig } => {
            let Some(c_tilde) = index.blinded(*voter, *round, *tallier) else {
                return invalid("no blinded commitment on the board");
            };
            if index.cast_round(*voter) == Some(*round) {
                return invalid("round was cast, not audited");
            }
            let msg = reveal_message(eid, *voter, *tallier, *round, commitment, rtilde);
            if !tallier_pk(ctx, *tallier).is_some_and(|pk| verify_sig(pk, &msg, reveal_sig)) {
                return invalid("reveal is not signed by the tallier");
            }
            if audit_poio_holds(ctx, commitment, c_tilde, rtilde) {
                PoioFinding::Valid(Blame::Tallier(*tallier))
            } else {
                invalid("reveal opens the published commitment")
            }
        }
        Poio::Silence { voter, tallier, round, request_sig } => {
            if index.blinded(*voter, *round, *tallier).is_none() {
                return invalid("no blinded commitment on the board");
            }
            if index.cast_round(*voter) == Some(*round) {
                return invalid("round was cast, not audited");
            }
            let msg = decision_message::<G>(eid, *voter, *round, false);
            if !voter_pk(ctx, *voter).is_some_and(|pk| verify_sig(pk, &msg, request_sig)) {
                return invalid("audit request is not signed by the voter");
            }
            PoioFinding::Valid(Blame::Tallier(*tallier))
        }
        Poio::OpeningMismatch {
            voter,
            tallier,
            round,
            commitment,
            proof_digest,
            submit_sig,
            share,
            randomness,
            opening_sig,
        } => {
            if index.cast_round(*voter) != Some(*round) {
                return invalid("round is not the cast round");
            }
            let Some(pk) = voter_pk(ctx, *voter) else { return invalid("unknown voter") };
            let submitted = share_message(eid, *voter, *tallier, *round, commitment, proof_digest);
            let opened = opening_message(eid, *voter, *tallier, *round, share, randomness);
            if !verify_sig(pk, &submitted, submit_sig) || !verify_sig(pk, &opened, opening_sig) {
                return invalid("share or opening is not signed by the voter");
            }
            match comm_vec(&ctx.params, share, randomness) {
                Ok(c) if c == *commitment => invalid("opening matches the commitment"),
                _ => PoioFinding::Valid(Blame::Voter(*voter)),
            }
        }
        Poio::AggregateMismatch { tallier, v_bot, r_bot, rtilde_bot, tallier_sig } => {
            let msg = aggregate_message(eid, *tallier, v_bot, r_bot, rtilde_bot);
            if !tallier_pk(ctx, *tallier).is_some_and(|pk| verify_sig(pk, &msg, tallier_sig)) {
                return invalid("aggregate is not signed by the tallier");
            }
            match comm_vec(&ctx.params, v_bot, &(*r_bot + *rtilde_bot)) {
                Ok(c) if c == index.tallier_product(*tallier) => invalid("aggregate opens the board product"),
                _ => PoioFinding::Valid(Blame::Tallier(*tallier)),
            }
        }
    }
}

/// Blame for a rejected ballot: a tallier holding a share the voter never
/// signed is evicted; otherwise a failing proof convicts the voter and a
/// passing one convicts whoever posted the rejection.
pub fn nizk_blame<G: PrimeGroup>(
    ctx: &PublicContext<G>,
    index: &BoardIndex<G>,
    nizk: &PoioNizk<G>,
    appender: PartyId,
) -> Blame {
    let accuser = Blame::of(appender);
    if index.cast_round(nizk.voter) != Some(nizk.round) || nizk.shares.len() != ctx.n_t() {
        return accuser;
    }
    let Some(pk) = voter_pk(ctx, nizk.voter) else { return accuser };
    let digest = nizk.proof.digest();
    for (j, s) in nizk.shares.iter().enumerate() {
        let msg = share_message(ctx.election_id(), nizk.voter, j as u32, nizk.round, &s.commitment, &digest);
        if !verify_sig(pk, &msg, &s.voter_sig) {
            return Blame::Tallier(j as u32);
        }
    }
    let aggregate = Commitment::product(nizk.shares.iter().map(|s| &s.commitment));
    if verify_vote(&ctx.vote_vk, &aggregate, &nizk.proof, nizk.voter, ctx.election_id()) {
        accuser
    } else {
        Blame::Voter(nizk.voter)
    }
}
