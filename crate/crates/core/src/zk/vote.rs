use rand::RngCore;

use super::sigma::{BitProof, DlogProof, LinkProof, LinkWitness};
use super::{NizkContext, ProvingKey, Relation, VerifyingKey, ZkError, PROOF_FORMAT_V1};
use crate::codec::{CodecError, Decoder, Encoder};
use crate::commit::{BallotSecrets, Commitment};
use crate::group::PrimeGroup;
use crate::hash::{digest, FsTranscript};

/// Well-formedness proof for a ballot: the aggregate of the share
/// commitments opens to a one-hot vector.
///
/// `coord_commitments[k] = g^{v[k]} · h^{s_k}` each carry a bit proof, the
/// sum proof shows `Π_k e_k / g` is a power of `h` (exactly one coordinate is
/// set), and the link proof ties the `e_k` to the aggregate commitment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofVote<G: PrimeGroup> {
    pub coord_commitments: Vec<G::Element>,
    pub bit_proofs: Vec<BitProof<G>>,
    pub sum_proof: DlogProof<G>,
    pub link_proof: LinkProof<G>,
}

fn statement<G: PrimeGroup>(
    ctx: &NizkContext<G>,
    aggregate: &Commitment<G>,
    coords: &[G::Element],
    voter_id: u32,
    election_id: &[u8],
) -> FsTranscript<G> {
    let mut t = ctx.transcript(b"vote");
    t.append_bytes(b"election", election_id);
    t.append_u64(b"voter", voter_id as u64);
    t.append_element(b"aggregate", aggregate.element());
    t.append_elements(b"coords", coords);
    t
}

fn sum_target<G: PrimeGroup>(ctx: &NizkContext<G>, coords: &[G::Element]) -> G::Element {
    let prod = coords.iter().fold(G::identity(), |acc, e| G::op(&acc, e));
    G::div(&prod, &ctx.params().g)
}

pub fn prove_vote<G: PrimeGroup, R: RngCore + ?Sized>(
    pk: &ProvingKey<G>,
    secrets: &BallotSecrets<G>,
    share_commitments: &[Commitment<G>],
    voter_id: u32,
    election_id: &[u8],
    rng: &mut R,
) -> Result<ProofVote<G>, ZkError> {
    let ctx = &pk.0;
    ctx.expect(Relation::Vote)?;
    let params = ctx.params();
    let choice = secrets
        .vote
        .choice()
        .ok_or_else(|| ZkError::StatementFalse("vote is not one-hot".into()))?;
    if secrets.vote.len() != params.n_choices() {
        return Err(ZkError::StatementFalse("vote has the wrong number of choices".into()));
    }
    if share_commitments.len() != secrets.n_shares() || secrets.commitments(params)? != share_commitments {
        return Err(ZkError::StatementFalse("share commitments do not match the secrets".into()));
    }
    if secrets.reconstruct().coords != secrets.vote.coords {
        return Err(ZkError::StatementFalse("shares do not reconstruct the vote".into()));
    }

    let aggregate = Commitment::product(share_commitments);
    let n = params.n_choices();
    let blinds: Vec<G::Scalar> = (0..n).map(|_| G::random_scalar(rng)).collect();
    let coord_commitments: Vec<G::Element> = (0..n)
        .map(|k| {
            let base = if k == choice { params.g } else { G::identity() };
            G::op(&base, &G::pow(&params.h, &blinds[k]))
        })
        .collect();

    let mut t = statement(ctx, &aggregate, &coord_commitments, voter_id, election_id);
    let bit_proofs = (0..n)
        .map(|k| BitProof::prove(&mut t, params, &coord_commitments[k], k == choice, &blinds[k], rng))
        .collect();
    let blind_sum = blinds.iter().fold(G::zero(), |acc, s| acc + *s);
    let sum_proof = DlogProof::prove(&mut t, &params.h, &sum_target(ctx, &coord_commitments), &blind_sum, rng);
    let link_proof = LinkProof::prove(
        &mut t,
        params,
        aggregate.element(),
        &coord_commitments,
        LinkWitness { x: &secrets.vote.coords, r: secrets.total_randomness(), s: &blinds },
        rng,
    );
    Ok(ProofVote { coord_commitments, bit_proofs, sum_proof, link_proof })
}

pub fn verify_vote<G: PrimeGroup>(
    vk: &VerifyingKey<G>,
    aggregate: &Commitment<G>,
    proof: &ProofVote<G>,
    voter_id: u32,
    election_id: &[u8],
) -> bool {
    let ctx = &vk.0;
    if ctx.relation() != Relation::Vote {
        return false;
    }
    let params = ctx.params();
    let n = params.n_choices();
    if proof.coord_commitments.len() != n || proof.bit_proofs.len() != n {
        return false;
    }
    let mut t = statement(ctx, aggregate, &proof.coord_commitments, voter_id, election_id);
    for (e, bp) in proof.coord_commitments.iter().zip(&proof.bit_proofs) {
        if !bp.verify(&mut t, params, e) {
            return false;
        }
    }
    if !proof.sum_proof.verify(&mut t, &params.h, &sum_target(ctx, &proof.coord_commitments)) {
        return false;
    }
    proof.link_proof.verify(&mut t, params, aggregate.element(), &proof.coord_commitments)
}

impl<G: PrimeGroup> ProofVote<G> {
    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.elements(&self.coord_commitments);
        enc.len(self.bit_proofs.len());
        for b in &self.bit_proofs {
            b.encode(enc);
        }
        self.sum_proof.encode(enc);
        self.link_proof.encode(enc);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        let coord_commitments = dec.elements()?;
        let n = dec.len("bit proofs")?;
        let bit_proofs = (0..n).map(|_| BitProof::decode(dec)).collect::<Result<_, _>>()?;
        Ok(ProofVote {
            coord_commitments,
            bit_proofs,
            sum_proof: DlogProof::decode(dec)?,
            link_proof: LinkProof::decode(dec)?,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        enc.u8(PROOF_FORMAT_V1);
        self.encode(&mut enc);
        enc.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut dec = Decoder::new(bytes);
        match dec.u8()? {
            PROOF_FORMAT_V1 => {}
            tag => return Err(CodecError::UnknownTag { what: "vote proof format", tag }),
        }
        let p = Self::decode(&mut dec)?;
        dec.finish()?;
        Ok(p)
    }

    /// Digest that voters sign alongside each share commitment.
    pub fn digest(&self) -> [u8; 32] {
        digest(b"ace/proof-vote/v1", &self.to_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commit::{share_any, share_vote, VoteVector};
    use crate::group::{Ristretto, Tiny23};
    use crate::params::derive_params;
    use crate::zk::nizk_setup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn setup<G: PrimeGroup>(n: usize) -> (ProvingKey<G>, VerifyingKey<G>) {
        let p = derive_params::<G>(n, b"ace-v1").unwrap();
        nizk_setup(&p, Relation::Vote)
    }

    #[test]
    fn honest_ballot_verifies() {
        let (pk, vk) = setup::<Ristretto>(3);
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let s = share_vote(&VoteVector::one_hot(3, 2), 3, &mut rng).unwrap();
        let cs = s.commitments(pk.0.params()).unwrap();
        let proof = prove_vote(&pk, &s, &cs, 7, b"e1", &mut rng).unwrap();
        let agg = Commitment::product(&cs);
        assert!(verify_vote(&vk, &agg, &proof, 7, b"e1"));
        assert_eq!(ProofVote::from_bytes(&proof.to_bytes()).unwrap(), proof);
    }

    #[test]
    fn tiny_backend_completeness() {
        let (pk, vk) = setup::<Tiny23>(2);
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        for i in 0..200 {
            let s = share_vote(&VoteVector::one_hot(2, i % 2), 2, &mut rng).unwrap();
            let cs = s.commitments(pk.0.params()).unwrap();
            let proof = prove_vote(&pk, &s, &cs, 1, b"e", &mut rng).unwrap();
            assert!(verify_vote(&vk, &Commitment::product(&cs), &proof, 1, b"e"));
        }
    }

    #[test]
    fn refuses_non_one_hot() {
        let (pk, _) = setup::<Ristretto>(2);
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let s = share_any(&VoteVector::from_u64s(&[1, 1]), 2, &mut rng).unwrap();
        let cs = s.commitments(pk.0.params()).unwrap();
        assert!(matches!(prove_vote(&pk, &s, &cs, 1, b"e", &mut rng), Err(ZkError::StatementFalse(_))));
    }

    #[test]
    fn refuses_inconsistent_commitments() {
        let (pk, _) = setup::<Ristretto>(2);
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let s = share_vote(&VoteVector::one_hot(2, 0), 2, &mut rng).unwrap();
        let mut cs = s.commitments(pk.0.params()).unwrap();
        cs.swap(0, 1);
        assert!(prove_vote(&pk, &s, &cs, 1, b"e", &mut rng).is_err());
    }

    #[test]
    fn bound_to_voter_and_election() {
        let (pk, vk) = setup::<Ristretto>(2);
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let s = share_vote(&VoteVector::one_hot(2, 1), 2, &mut rng).unwrap();
        let cs = s.commitments(pk.0.params()).unwrap();
        let proof = prove_vote(&pk, &s, &cs, 4, b"e", &mut rng).unwrap();
        let agg = Commitment::product(&cs);
        assert!(!verify_vote(&vk, &agg, &proof, 5, b"e"));
        assert!(!verify_vote(&vk, &agg, &proof, 4, b"f"));
        let other = rerandomized(&pk, &agg);
        assert!(!verify_vote(&vk, &other, &proof, 4, b"e"));
    }

    fn rerandomized(pk: &ProvingKey<Ristretto>, c: &Commitment<Ristretto>) -> Commitment<Ristretto> {
        crate::commit::rerand(pk.0.params(), c, &Ristretto::one())
    }

    #[test]
    fn result_context_is_rejected() {
        let p = derive_params::<Ristretto>(2, b"ace-v1").unwrap();
        let (rpk, rvk) = nizk_setup(&p, Relation::Result);
        let (pk, _) = nizk_setup(&p, Relation::Vote);
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        let s = share_vote(&VoteVector::one_hot(2, 1), 1, &mut rng).unwrap();
        let cs = s.commitments(&p).unwrap();
        assert!(matches!(prove_vote(&rpk, &s, &cs, 1, b"e", &mut rng), Err(ZkError::WrongRelation { .. })));
        let proof = prove_vote(&pk, &s, &cs, 1, b"e", &mut rng).unwrap();
        assert!(!verify_vote(&rvk, &Commitment::product(&cs), &proof, 1, b"e"));
    }
}
