//! Non-interactive zero-knowledge proofs for ballot well-formedness and
//! result correctness.
//!
//! All proofs are Fiat-Shamir compiled sigma protocols with a transparent
//! setup: [`nizk_setup`] only fixes domain tags and binds the parameter hash,
//! there is no secret material. Provers refuse false statements instead of
//! emitting proofs that would not verify; [`forge`] holds the shape-correct
//! garbage generators used to fuzz verifiers.

pub mod forge;
mod range;
mod result;
pub mod sigma;
pub mod simulate;
mod vote;

use rand::RngCore;

use crate::commit::CommitError;
use crate::group::PrimeGroup;
use crate::hash::FsTranscript;
use crate::params::GroupParams;

pub use range::{bits_for, prove_range, verify_range, RangeProof};
pub use result::{lowest_argmax, prove_result, verify_result, ProofResult};
pub use sigma::{BitProof, DlogProof, LinkProof};
pub use vote::{prove_vote, verify_vote, ProofVote};

/// Leading byte of every serialized proof.
pub const PROOF_FORMAT_V1: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Vote,
    Result,
}

impl Relation {
    fn domain(self) -> &'static [u8] {
        match self {
            Relation::Vote => b"ace/nizk/vote/v1",
            Relation::Result => b"ace/nizk/result/v1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZkError {
    #[error("statement false: {0}")]
    StatementFalse(String),
    #[error("context is for relation {actual:?}, expected {expected:?}")]
    WrongRelation { expected: Relation, actual: Relation },
    #[error(transparent)]
    Commit(#[from] CommitError),
}

/// Per-relation context shared by prover and verifier.
#[derive(Clone, Debug)]
pub struct NizkContext<G: PrimeGroup> {
    relation: Relation,
    params: GroupParams<G>,
    params_hash: [u8; 32],
}

impl<G: PrimeGroup> NizkContext<G> {
    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn params(&self) -> &GroupParams<G> {
        &self.params
    }

    pub fn domain_tag(&self) -> &'static [u8] {
        self.relation.domain()
    }

    pub fn params_hash(&self) -> [u8; 32] {
        self.params_hash
    }

    pub(crate) fn transcript(&self, label: &[u8]) -> FsTranscript<G> {
        let mut t = FsTranscript::new(self.relation.domain());
        t.append_bytes(b"params", &self.params_hash);
        t.append_bytes(b"proof", label);
        t
    }

    fn expect(&self, relation: Relation) -> Result<(), ZkError> {
        if self.relation != relation {
            return Err(ZkError::WrongRelation { expected: relation, actual: self.relation });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ProvingKey<G: PrimeGroup>(pub NizkContext<G>);

#[derive(Clone, Debug)]
pub struct VerifyingKey<G: PrimeGroup>(pub NizkContext<G>);

pub fn nizk_setup<G: PrimeGroup>(params: &GroupParams<G>, relation: Relation) -> (ProvingKey<G>, VerifyingKey<G>) {
    let ctx = NizkContext { relation, params: params.clone(), params_hash: params.params_hash() };
    (ProvingKey(ctx.clone()), VerifyingKey(ctx))
}

/// Standalone bit proof for `c = g^value · h^randomness`.
pub fn prove_bit<G: PrimeGroup, R: RngCore + ?Sized>(
    ctx: &NizkContext<G>,
    commitment: &G::Element,
    value: u64,
    randomness: &G::Scalar,
    rng: &mut R,
) -> Result<BitProof<G>, ZkError> {
    if value > 1 {
        return Err(ZkError::StatementFalse(format!("bit value {value} is not 0 or 1")));
    }
    let p = ctx.params();
    let expected = G::op(&G::pow(&p.g, &G::scalar_from_u64(value)), &G::pow(&p.h, randomness));
    if expected != *commitment {
        return Err(ZkError::StatementFalse("commitment does not open to the bit".into()));
    }
    let mut t = ctx.transcript(b"bit");
    Ok(BitProof::prove(&mut t, p, commitment, value == 1, randomness, rng))
}

pub fn verify_bit<G: PrimeGroup>(ctx: &NizkContext<G>, commitment: &G::Element, proof: &BitProof<G>) -> bool {
    let mut t = ctx.transcript(b"bit");
    proof.verify(&mut t, ctx.params(), commitment)
}
