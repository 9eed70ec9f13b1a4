//! Private-channel messages and the byte strings their signatures cover.

use crate::board::PartyId;
use crate::codec::Encoder;
use crate::commit::{Commitment, VoteShare};
use crate::group::PrimeGroup;
use crate::sig::Signature;
use crate::zk::ProofVote;

fn header<G: PrimeGroup>(domain: &[u8], election_id: &[u8; 32]) -> Encoder<G> {
    let mut enc = Encoder::new();
    enc.bytes(domain).fixed(election_id);
    enc
}

/// Signed by the voter for every share commitment it submits.
pub fn share_message<G: PrimeGroup>(
    election_id: &[u8; 32],
    voter: u32,
    tallier: u32,
    round: u32,
    c: &Commitment<G>,
    proof_digest: &[u8; 32],
) -> Vec<u8> {
    let mut enc = header::<G>(b"ace/msg/share/v1", election_id);
    enc.u32(voter).u32(tallier).u32(round).element(c.element()).fixed(proof_digest);
    enc.finish()
}

/// Signed AUDIT/CAST decision; the same bytes go to every tallier.
pub fn decision_message<G: PrimeGroup>(election_id: &[u8; 32], voter: u32, round: u32, cast: bool) -> Vec<u8> {
    let mut enc = header::<G>(b"ace/msg/decision/v1", election_id);
    enc.u32(voter).u32(round).bool(cast);
    enc.finish()
}

/// Signed by a tallier when it reveals `r̃`; echoes the commitment it holds.
pub fn reveal_message<G: PrimeGroup>(
    election_id: &[u8; 32],
    voter: u32,
    tallier: u32,
    round: u32,
    c: &Commitment<G>,
    rtilde: &G::Scalar,
) -> Vec<u8> {
    let mut enc = header::<G>(b"ace/msg/reveal/v1", election_id);
    enc.u32(voter).u32(tallier).u32(round).element(c.element()).scalar(rtilde);
    enc.finish()
}

pub fn opening_message<G: PrimeGroup>(
    election_id: &[u8; 32],
    voter: u32,
    tallier: u32,
    round: u32,
    share: &VoteShare<G>,
    r: &G::Scalar,
) -> Vec<u8> {
    let mut enc = header::<G>(b"ace/msg/opening/v1", election_id);
    enc.u32(voter).u32(tallier).u32(round).scalars(&share.coords).scalar(r);
    enc.finish()
}

/// Tallier verdict that a cast ballot is well formed.
pub fn validity_message<G: PrimeGroup>(election_id: &[u8; 32], voter: u32, round: u32, attested: &[[u8; 32]]) -> Vec<u8> {
    let mut enc = header::<G>(b"ace/msg/validity/v1", election_id);
    enc.u32(voter).u32(round).len(attested.len());
    for a in attested {
        enc.fixed(a);
    }
    enc.finish()
}

pub fn aggregate_message<G: PrimeGroup>(
    election_id: &[u8; 32],
    tallier: u32,
    v_bot: &VoteShare<G>,
    r_bot: &G::Scalar,
    rtilde_bot: &G::Scalar,
) -> Vec<u8> {
    let mut enc = header::<G>(b"ace/msg/aggregate/v1", election_id);
    enc.u32(tallier).scalars(&v_bot.coords).scalar(r_bot).scalar(rtilde_bot);
    enc.finish()
}

/// Digest of a blinded commitment, as attested in validity records.
pub fn commitment_digest<G: PrimeGroup>(c: &Commitment<G>) -> [u8; 32] {
    crate::hash::digest(b"ace/attest/v1", &c.to_bytes())
}

/// One tallier's view of a cast share, exchanged during synchronization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncItem<G: PrimeGroup> {
    pub voter: u32,
    pub round: u32,
    pub commitment: Commitment<G>,
    pub voter_sig: Signature<G>,
    pub opened: bool,
}

/// Per-tallier sums over accepted voters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TallierAggregate<G: PrimeGroup> {
    pub v_bot: VoteShare<G>,
    pub r_bot: G::Scalar,
    pub rtilde_bot: G::Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload<G: PrimeGroup> {
    Submit { round: u32, commitment: Commitment<G>, proof: ProofVote<G>, sig: Signature<G> },
    Decision { round: u32, cast: bool, sig: Signature<G> },
    Reveal { round: u32, commitment: Commitment<G>, rtilde: G::Scalar, sig: Signature<G> },
    Opening { round: u32, share: VoteShare<G>, randomness: G::Scalar, sig: Signature<G> },
    Sync { items: Vec<SyncItem<G>> },
    ValiditySigs { sigs: Vec<(u32, u32, Signature<G>)> },
    Aggregate { aggregate: TallierAggregate<G>, sig: Signature<G> },
}

impl<G: PrimeGroup> Payload<G> {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Submit { .. } => "submit",
            Payload::Decision { .. } => "decision",
            Payload::Reveal { .. } => "reveal",
            Payload::Opening { .. } => "opening",
            Payload::Sync { .. } => "sync",
            Payload::ValiditySigs { .. } => "validity",
            Payload::Aggregate { .. } => "aggregate",
        }
    }

    pub fn encode(&self, enc: &mut Encoder<G>) {
        match self {
            Payload::Submit { round, commitment, proof, sig } => {
                enc.u8(1).u32(*round).element(commitment.element());
                proof.encode(enc);
                sig.encode(enc);
            }
            Payload::Decision { round, cast, sig } => {
                enc.u8(2).u32(*round).bool(*cast);
                sig.encode(enc);
            }
            Payload::Reveal { round, commitment, rtilde, sig } => {
                enc.u8(3).u32(*round).element(commitment.element()).scalar(rtilde);
                sig.encode(enc);
            }
            Payload::Opening { round, share, randomness, sig } => {
                enc.u8(4).u32(*round).scalars(&share.coords).scalar(randomness);
                sig.encode(enc);
            }
            Payload::Sync { items } => {
                enc.u8(5).len(items.len());
                for it in items {
                    enc.u32(it.voter).u32(it.round).element(it.commitment.element()).bool(it.opened);
                    it.voter_sig.encode(enc);
                }
            }
            Payload::ValiditySigs { sigs } => {
                enc.u8(6).len(sigs.len());
                for (v, r, s) in sigs {
                    enc.u32(*v).u32(*r);
                    s.encode(enc);
                }
            }
            Payload::Aggregate { aggregate, sig } => {
                enc.u8(7).scalars(&aggregate.v_bot.coords).scalar(&aggregate.r_bot).scalar(&aggregate.rtilde_bot);
                sig.encode(enc);
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.encode(&mut enc);
        enc.finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message<G: PrimeGroup> {
    pub from: PartyId,
    pub to: PartyId,
    pub payload: Payload<G>,
}
