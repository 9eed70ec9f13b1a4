use crate::codec::{CodecError, Decoder, Encoder};
use crate::commit::{Commitment, VoteShare};
use crate::group::{Backend, PrimeGroup};
use crate::hash::digest;
use crate::sig::{sign, verify_sig, KeyPair, Signature};
use crate::zk::{ProofResult, ProofVote};

const ENTRY_SIG_DOMAIN: &[u8] = b"ace/board/entry/v1";
const CHAIN_DOMAIN: &[u8] = b"ace/board/chain/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartyId {
    Authority,
    Voter(u32),
    Tallier(u32),
    Designated,
}

impl PartyId {
    fn encode<G: PrimeGroup>(&self, enc: &mut Encoder<G>) {
        match *self {
            PartyId::Authority => enc.u8(0).u32(0),
            PartyId::Voter(i) => enc.u8(1).u32(i),
            PartyId::Tallier(j) => enc.u8(2).u32(j),
            PartyId::Designated => enc.u8(3).u32(0),
        };
    }

    fn decode<G: PrimeGroup>(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        let tag = dec.u8()?;
        let idx = dec.u32()?;
        match (tag, idx) {
            (0, 0) => Ok(PartyId::Authority),
            (1, i) => Ok(PartyId::Voter(i)),
            (2, j) => Ok(PartyId::Tallier(j)),
            (3, 0) => Ok(PartyId::Designated),
            (0 | 3, _) => Err(CodecError::NonCanonical("party index")),
            (tag, _) => Err(CodecError::UnknownTag { what: "party", tag }),
        }
    }
}

impl std::fmt::Display for PartyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartyId::Authority => write!(f, "authority"),
            PartyId::Voter(i) => write!(f, "voter {i}"),
            PartyId::Tallier(j) => write!(f, "tallier {j}"),
            PartyId::Designated => write!(f, "designated tallier"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Setup,
    Voting,
    Tally,
    Result,
    Verification,
}

impl Phase {
    pub const ALL: [Phase; 5] = [Phase::Setup, Phase::Voting, Phase::Tally, Phase::Result, Phase::Verification];

    fn id(self) -> u8 {
        self as u8
    }

    fn from_id(id: u8) -> Option<Phase> {
        Phase::ALL.get(id as usize).copied()
    }

    pub fn next(self) -> Option<Phase> {
        Phase::from_id(self.id() + 1)
    }
}

/// Start ticks of the phases after `Setup`, which begins at tick 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseSchedule {
    pub voting: u64,
    pub tally: u64,
    pub result: u64,
    pub verification: u64,
}

impl PhaseSchedule {
    pub fn is_monotone(&self) -> bool {
        self.voting <= self.tally && self.tally <= self.result && self.result <= self.verification
    }

    pub fn start(&self, phase: Phase) -> u64 {
        match phase {
            Phase::Setup => 0,
            Phase::Voting => self.voting,
            Phase::Tally => self.tally,
            Phase::Result => self.result,
            Phase::Verification => self.verification,
        }
    }

    /// The phase whose interval `[start, next start)` contains `tick`.
    pub fn phase_at(&self, tick: u64) -> Phase {
        let mut phase = Phase::Setup;
        for p in Phase::ALL {
            if tick >= self.start(p) {
                phase = p;
            }
        }
        phase
    }
}

/// Genesis record: parameter commitment and authenticated rolls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamsRecord<G: PrimeGroup> {
    pub election_id: [u8; 32],
    pub backend: Backend,
    pub n_choices: u32,
    pub domain_tag: Vec<u8>,
    pub params_hash: [u8; 32],
    pub config_digest: [u8; 32],
    pub voter_pks: Vec<G::Element>,
    pub tallier_pks: Vec<G::Element>,
    pub designated_pk: G::Element,
    pub authority_pk: G::Element,
    pub schedule: PhaseSchedule,
}

impl<G: PrimeGroup> ParamsRecord<G> {
    pub fn n_v(&self) -> u64 {
        self.voter_pks.len() as u64
    }

    pub fn n_t(&self) -> usize {
        self.tallier_pks.len()
    }

    pub fn pk_of(&self, party: PartyId) -> Option<&G::Element> {
        match party {
            PartyId::Authority => Some(&self.authority_pk),
            PartyId::Designated => Some(&self.designated_pk),
            PartyId::Voter(i) => self.voter_pks.get(i as usize),
            PartyId::Tallier(j) => self.tallier_pks.get(j as usize),
        }
    }
}

/// How a cast ballot left the validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity<G: PrimeGroup> {
    /// `attested[j]` is the digest of the `c̃^{(j)}` every tallier saw on
    /// the board; `signatures[j]` is tallier `j`'s signature on the verdict.
    Accepted { attested: Vec<[u8; 32]>, signatures: Vec<Signature<G>> },
    Rejected(PoioNizk<G>),
}

/// A share commitment with the voter's submission signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedShare<G: PrimeGroup> {
    pub commitment: Commitment<G>,
    pub voter_sig: Signature<G>,
}

/// Evidence that a ballot's proof fails: the proof and every signed share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoioNizk<G: PrimeGroup> {
    pub voter: u32,
    pub round: u32,
    pub proof: ProofVote<G>,
    pub shares: Vec<SignedShare<G>>,
}

/// Dispute records. Each carries the signed messages its validity check needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Poio<G: PrimeGroup> {
    /// Tallier-signed audit reveal `(c, r̃)` that does not open the c̃ on the board.
    AuditMismatch {
        voter: u32,
        tallier: u32,
        round: u32,
        commitment: Commitment<G>,
        rtilde: G::Scalar,
        reveal_sig: Signature<G>,
    },
    /// Voter-signed share and opening that do not match.
    OpeningMismatch {
        voter: u32,
        tallier: u32,
        round: u32,
        commitment: Commitment<G>,
        proof_digest: [u8; 32],
        submit_sig: Signature<G>,
        share: VoteShare<G>,
        randomness: G::Scalar,
        opening_sig: Signature<G>,
    },
    /// An audit request the tallier never answered.
    Silence { voter: u32, tallier: u32, round: u32, request_sig: Signature<G> },
    /// A tallier-signed aggregate that does not open `Π_i c̃_i^{(j)}`.
    AggregateMismatch {
        tallier: u32,
        v_bot: VoteShare<G>,
        r_bot: G::Scalar,
        rtilde_bot: G::Scalar,
        tallier_sig: Signature<G>,
    },
}

impl<G: PrimeGroup> Poio<G> {
    pub fn kind(&self) -> &'static str {
        match self {
            Poio::AuditMismatch { .. } => "audit-mismatch",
            Poio::OpeningMismatch { .. } => "opening-mismatch",
            Poio::Silence { .. } => "silence",
            Poio::AggregateMismatch { .. } => "aggregate-mismatch",
        }
    }

    pub fn voter(&self) -> Option<u32> {
        match self {
            Poio::AuditMismatch { voter, .. } | Poio::OpeningMismatch { voter, .. } | Poio::Silence { voter, .. } => {
                Some(*voter)
            }
            Poio::AggregateMismatch { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultRecord<G: PrimeGroup> {
    pub winner: u32,
    pub rtilde_total: G::Scalar,
    pub proof: ProofResult<G>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntryKind {
    Params,
    PhaseMarker,
    BlindedCommitment,
    AuditDiscard,
    CastFinal,
    VoteValidity,
    Poio,
    Result,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body<G: PrimeGroup> {
    Params(ParamsRecord<G>),
    PhaseMarker { phase: Phase, tick: u64 },
    BlindedCommitment { voter: u32, tallier: u32, round: u32, blinded: Commitment<G> },
    AuditDiscard { voter: u32, round: u32 },
    CastFinal { voter: u32, round: u32 },
    VoteValidity { voter: u32, round: u32, outcome: Validity<G> },
    Poio(Poio<G>),
    Result(ResultRecord<G>),
}

impl<G: PrimeGroup> Body<G> {
    pub fn kind(&self) -> EntryKind {
        match self {
            Body::Params(_) => EntryKind::Params,
            Body::PhaseMarker { .. } => EntryKind::PhaseMarker,
            Body::BlindedCommitment { .. } => EntryKind::BlindedCommitment,
            Body::AuditDiscard { .. } => EntryKind::AuditDiscard,
            Body::CastFinal { .. } => EntryKind::CastFinal,
            Body::VoteValidity { .. } => EntryKind::VoteValidity,
            Body::Poio(_) => EntryKind::Poio,
            Body::Result(_) => EntryKind::Result,
        }
    }

    /// Voter the entry is about, if any.
    pub fn voter(&self) -> Option<u32> {
        match self {
            Body::BlindedCommitment { voter, .. }
            | Body::AuditDiscard { voter, .. }
            | Body::CastFinal { voter, .. }
            | Body::VoteValidity { voter, .. } => Some(*voter),
            Body::Poio(p) => p.voter(),
            _ => None,
        }
    }

    pub fn encode(&self, enc: &mut Encoder<G>) {
        match self {
            Body::Params(p) => {
                enc.u8(1)
                    .fixed(&p.election_id)
                    .u8(p.backend.id())
                    .u32(p.n_choices)
                    .bytes(&p.domain_tag)
                    .fixed(&p.params_hash)
                    .fixed(&p.config_digest)
                    .elements(&p.voter_pks)
                    .elements(&p.tallier_pks)
                    .element(&p.designated_pk)
                    .element(&p.authority_pk)
                    .u64(p.schedule.voting)
                    .u64(p.schedule.tally)
                    .u64(p.schedule.result)
                    .u64(p.schedule.verification);
            }
            Body::PhaseMarker { phase, tick } => {
                enc.u8(2).u8(phase.id()).u64(*tick);
            }
            Body::BlindedCommitment { voter, tallier, round, blinded } => {
                enc.u8(3).u32(*voter).u32(*tallier).u32(*round).element(blinded.element());
            }
            Body::AuditDiscard { voter, round } => {
                enc.u8(4).u32(*voter).u32(*round);
            }
            Body::CastFinal { voter, round } => {
                enc.u8(5).u32(*voter).u32(*round);
            }
            Body::VoteValidity { voter, round, outcome } => {
                enc.u8(6).u32(*voter).u32(*round);
                match outcome {
                    Validity::Accepted { attested, signatures } => {
                        enc.u8(1).len(attested.len());
                        for a in attested {
                            enc.fixed(a);
                        }
                        enc.len(signatures.len());
                        for s in signatures {
                            s.encode(enc);
                        }
                    }
                    Validity::Rejected(p) => {
                        enc.u8(2);
                        encode_nizk(p, enc);
                    }
                }
            }
            Body::Poio(p) => {
                enc.u8(7);
                encode_poio(p, enc);
            }
            Body::Result(r) => {
                enc.u8(8).u32(r.winner).scalar(&r.rtilde_total);
                r.proof.encode(enc);
            }
        }
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        Ok(match dec.u8()? {
            1 => Body::Params(ParamsRecord {
                election_id: dec.fixed()?,
                backend: {
                    let id = dec.u8()?;
                    Backend::from_id(id).ok_or(CodecError::UnknownTag { what: "backend", tag: id })?
                },
                n_choices: dec.u32()?,
                domain_tag: dec.bytes()?,
                params_hash: dec.fixed()?,
                config_digest: dec.fixed()?,
                voter_pks: dec.elements()?,
                tallier_pks: dec.elements()?,
                designated_pk: dec.element()?,
                authority_pk: dec.element()?,
                schedule: PhaseSchedule {
                    voting: dec.u64()?,
                    tally: dec.u64()?,
                    result: dec.u64()?,
                    verification: dec.u64()?,
                },
            }),
            2 => {
                let id = dec.u8()?;
                let phase = Phase::from_id(id).ok_or(CodecError::UnknownTag { what: "phase", tag: id })?;
                Body::PhaseMarker { phase, tick: dec.u64()? }
            }
            3 => Body::BlindedCommitment {
                voter: dec.u32()?,
                tallier: dec.u32()?,
                round: dec.u32()?,
                blinded: Commitment(dec.element()?),
            },
            4 => Body::AuditDiscard { voter: dec.u32()?, round: dec.u32()? },
            5 => Body::CastFinal { voter: dec.u32()?, round: dec.u32()? },
            6 => {
                let voter = dec.u32()?;
                let round = dec.u32()?;
                let outcome = match dec.u8()? {
                    1 => {
                        let n = dec.len("attestations")?;
                        let attested = (0..n).map(|_| dec.fixed()).collect::<Result<_, _>>()?;
                        let n = dec.len("signatures")?;
                        let signatures = (0..n).map(|_| Signature::decode(dec)).collect::<Result<_, _>>()?;
                        Validity::Accepted { attested, signatures }
                    }
                    2 => Validity::Rejected(decode_nizk(dec)?),
                    tag => return Err(CodecError::UnknownTag { what: "validity", tag }),
                };
                Body::VoteValidity { voter, round, outcome }
            }
            7 => Body::Poio(decode_poio(dec)?),
            8 => Body::Result(ResultRecord {
                winner: dec.u32()?,
                rtilde_total: dec.scalar()?,
                proof: ProofResult::decode(dec)?,
            }),
            tag => return Err(CodecError::UnknownTag { what: "entry", tag }),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.encode(&mut enc);
        enc.finish()
    }
}

fn encode_nizk<G: PrimeGroup>(p: &PoioNizk<G>, enc: &mut Encoder<G>) {
    enc.u32(p.voter).u32(p.round);
    p.proof.encode(enc);
    enc.len(p.shares.len());
    for s in &p.shares {
        enc.element(s.commitment.element());
        s.voter_sig.encode(enc);
    }
}

fn decode_nizk<G: PrimeGroup>(dec: &mut Decoder<'_, G>) -> Result<PoioNizk<G>, CodecError> {
    let voter = dec.u32()?;
    let round = dec.u32()?;
    let proof = ProofVote::decode(dec)?;
    let n = dec.len("signed shares")?;
    let shares = (0..n)
        .map(|_| Ok(SignedShare { commitment: Commitment(dec.element()?), voter_sig: Signature::decode(dec)? }))
        .collect::<Result<_, CodecError>>()?;
    Ok(PoioNizk { voter, round, proof, shares })
}

fn encode_poio<G: PrimeGroup>(p: &Poio<G>, enc: &mut Encoder<G>) {
    match p {
        Poio::AuditMismatch { voter, tallier, round, commitment, rtilde, reveal_sig } => {
            enc.u8(1).u32(*voter).u32(*tallier).u32(*round).element(commitment.element()).scalar(rtilde);
            reveal_sig.encode(enc);
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
            enc.u8(2).u32(*voter).u32(*tallier).u32(*round).element(commitment.element()).fixed(proof_digest);
            submit_sig.encode(enc);
            enc.scalars(&share.coords).scalar(randomness);
            opening_sig.encode(enc);
        }
        Poio::Silence { voter, tallier, round, request_sig } => {
            enc.u8(3).u32(*voter).u32(*tallier).u32(*round);
            request_sig.encode(enc);
        }
        Poio::AggregateMismatch { tallier, v_bot, r_bot, rtilde_bot, tallier_sig } => {
            enc.u8(4).u32(*tallier).scalars(&v_bot.coords).scalar(r_bot).scalar(rtilde_bot);
            tallier_sig.encode(enc);
        }
    }
}

fn decode_poio<G: PrimeGroup>(dec: &mut Decoder<'_, G>) -> Result<Poio<G>, CodecError> {
    Ok(match dec.u8()? {
        1 => Poio::AuditMismatch {
            voter: dec.u32()?,
            tallier: dec.u32()?,
            round: dec.u32()?,
            commitment: Commitment(dec.element()?),
            rtilde: dec.scalar()?,
            reveal_sig: Signature::decode(dec)?,
        },
        2 => Poio::OpeningMismatch {
            voter: dec.u32()?,
            tallier: dec.u32()?,
            round: dec.u32()?,
            commitment: Commitment(dec.element()?),
            proof_digest: dec.fixed()?,
            submit_sig: Signature::decode(dec)?,
            share: VoteShare { coords: dec.scalars()? },
            randomness: dec.scalar()?,
            opening_sig: Signature::decode(dec)?,
        },
        3 => Poio::Silence {
            voter: dec.u32()?,
            tallier: dec.u32()?,
            round: dec.u32()?,
            request_sig: Signature::decode(dec)?,
        },
        4 => Poio::AggregateMismatch {
            tallier: dec.u32()?,
            v_bot: VoteShare { coords: dec.scalars()? },
            r_bot: dec.scalar()?,
            rtilde_bot: dec.scalar()?,
            tallier_sig: Signature::decode(dec)?,
        },
        tag => return Err(CodecError::UnknownTag { what: "poio", tag }),
    })
}

/// A body signed by its appender, before the board places it in the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signed<G: PrimeGroup> {
    pub appender: PartyId,
    pub body: Body<G>,
    pub signature: Signature<G>,
}

/// The bytes an appender signs. Position in the chain is not covered, so
/// entries can be re-linked without their authors.
pub fn signing_message<G: PrimeGroup>(election_id: &[u8; 32], appender: PartyId, body: &Body<G>) -> Vec<u8> {
    let mut enc = Encoder::<G>::new();
    enc.fixed(ENTRY_SIG_DOMAIN).fixed(election_id);
    appender.encode(&mut enc);
    body.encode(&mut enc);
    enc.finish()
}

impl<G: PrimeGroup> Signed<G> {
    pub fn seal(kp: &KeyPair<G>, election_id: &[u8; 32], appender: PartyId, body: Body<G>) -> Self {
        let signature = sign(kp, &signing_message(election_id, appender, &body));
        Signed { appender, body, signature }
    }

    pub fn verify(&self, election_id: &[u8; 32], pk: &G::Element) -> bool {
        verify_sig(pk, &signing_message(election_id, self.appender, &self.body), &self.signature)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoardEntry<G: PrimeGroup> {
    pub seq: u64,
    pub tick: u64,
    pub prev_hash: [u8; 32],
    pub appender: PartyId,
    pub body: Body<G>,
    pub signature: Signature<G>,
}

impl<G: PrimeGroup> BoardEntry<G> {
    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.u64(self.seq).u64(self.tick).fixed(&self.prev_hash);
        self.appender.encode(enc);
        self.body.encode(enc);
        self.signature.encode(enc);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        Ok(BoardEntry {
            seq: dec.u64()?,
            tick: dec.u64()?,
            prev_hash: dec.fixed()?,
            appender: PartyId::decode(dec)?,
            body: Body::decode(dec)?,
            signature: Signature::decode(dec)?,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.encode(&mut enc);
        enc.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut dec = Decoder::new(bytes);
        let e = Self::decode(&mut dec)?;
        dec.finish()?;
        Ok(e)
    }

    pub fn hash(&self) -> [u8; 32] {
        digest(CHAIN_DOMAIN, &self.to_bytes())
    }

    pub fn signed(&self) -> Signed<G> {
        Signed { appender: self.appender, body: self.body.clone(), signature: self.signature }
    }
}
