use rand::RngCore;

use super::range::{bits_for, RangeProof};
use super::sigma::{LinkProof, LinkWitness};
use super::{NizkContext, ProvingKey, Relation, VerifyingKey, ZkError, PROOF_FORMAT_V1};
use crate::codec::{CodecError, Decoder, Encoder};
use crate::commit::{comm_vec, Commitment, VoteShare};
use crate::group::PrimeGroup;
use crate::hash::FsTranscript;

/// Proof that `c_⊥` commits to a tally whose lowest-index argmax is `winner`.
///
/// `tally_commitments[k] = g^{T[k]} · h^{u_k}` are linked to `c_⊥`; for every
/// `k != w` a range proof shows `T[w] - T[k] - strict_k ∈ [0, 2^m)` with
/// `m = bits_for(n_v)` and `strict_k = 1` iff `k < w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofResult<G: PrimeGroup> {
    pub tally_commitments: Vec<G::Element>,
    pub link_proof: LinkProof<G>,
    pub comparisons: Vec<RangeProof<G>>,
}

/// Lowest index of a maximal entry; 0 for an empty or all-zero tally.
pub fn lowest_argmax(tally: &[u64]) -> usize {
    let mut best = 0;
    for (k, &t) in tally.iter().enumerate() {
        if t > tally[best] {
            best = k;
        }
    }
    best
}

fn statement<G: PrimeGroup>(
    ctx: &NizkContext<G>,
    c_bot: &Commitment<G>,
    winner: usize,
    n_v: u64,
    election_id: &[u8],
    tally_commitments: &[G::Element],
) -> FsTranscript<G> {
    let mut t = ctx.transcript(b"result");
    t.append_bytes(b"election", election_id);
    t.append_u64(b"n_v", n_v);
    t.append_u64(b"winner", winner as u64);
    t.append_element(b"c_bot", c_bot.element());
    t.append_elements(b"tally", tally_commitments);
    t
}

fn difference<G: PrimeGroup>(ctx: &NizkContext<G>, t: &[G::Element], winner: usize, k: usize) -> G::Element {
    let d = G::div(&t[winner], &t[k]);
    if k < winner {
        G::div(&d, &ctx.params().g)
    } else {
        d
    }
}

#[allow(clippy::too_many_arguments)]
pub fn prove_result<G: PrimeGroup, R: RngCore + ?Sized>(
    pk: &ProvingKey<G>,
    tally: &[u64],
    r_total: &G::Scalar,
    c_bot: &Commitment<G>,
    winner: usize,
    n_v: u64,
    election_id: &[u8],
    rng: &mut R,
) -> Result<ProofResult<G>, ZkError> {
    let ctx = &pk.0;
    ctx.expect(Relation::Result)?;
    let params = ctx.params();
    let n = params.n_choices();
    if tally.len() != n {
        return Err(ZkError::StatementFalse(format!("tally has {} entries, expected {n}", tally.len())));
    }
    let share = VoteShare::<G>::from_u64s(tally);
    if comm_vec(params, &share, r_total)? != *c_bot {
        return Err(ZkError::StatementFalse("c_bot does not open to the tally".into()));
    }
    if winner >= n || winner != lowest_argmax(tally) {
        return Err(ZkError::StatementFalse(format!("{winner} is not the lowest-index argmax")));
    }
    if tally[winner] > n_v {
        return Err(ZkError::StatementFalse(format!("tally entry exceeds n_v = {n_v}")));
    }

    let blinds: Vec<G::Scalar> = (0..n).map(|_| G::random_scalar(rng)).collect();
    let tally_commitments: Vec<G::Element> = (0..n)
        .map(|k| G::op(&G::pow(&params.g, &share.coords[k]), &G::pow(&params.h, &blinds[k])))
        .collect();
    let mut t = statement(ctx, c_bot, winner, n_v, election_id, &tally_commitments);
    let link_proof = LinkProof::prove(
        &mut t,
        params,
        c_bot.element(),
        &tally_commitments,
        LinkWitness { x: &share.coords, r: *r_total, s: &blinds },
        rng,
    );
    let m = bits_for(n_v);
    let comparisons = (0..n)
        .filter(|&k| k != winner)
        .map(|k| {
            let strict = u64::from(k < winner);
            let d = tally[winner] - tally[k] - strict;
            let u = blinds[winner] - blinds[k];
            let dk = difference(ctx, &tally_commitments, winner, k);
            RangeProof::prove(&mut t, params, &dk, d, &u, m, rng)
        })
        .collect();
    Ok(ProofResult { tally_commitments, link_proof, comparisons })
}

pub fn verify_result<G: PrimeGroup>(
    vk: &VerifyingKey<G>,
    c_bot: &Commitment<G>,
    winner: usize,
    proof: &ProofResult<G>,
    n_v: u64,
    election_id: &[u8],
) -> bool {
    let ctx = &vk.0;
    if ctx.relation() != Relation::Result {
        return false;
    }
    let params = ctx.params();
    let n = params.n_choices();
    if winner >= n || proof.tally_commitments.len() != n || proof.comparisons.len() != n - 1 {
        return false;
    }
    let mut t = statement(ctx, c_bot, winner, n_v, election_id, &proof.tally_commitments);
    if !proof.link_proof.verify(&mut t, params, c_bot.element(), &proof.tally_commitments) {
        return false;
    }
    let m = bits_for(n_v);
    let others = (0..n).filter(|&k| k != winner);
    for (k, rp) in others.zip(&proof.comparisons) {
        let dk = difference(ctx, &proof.tally_commitments, winner, k);
        if !rp.verify(&mut t, params, &dk, m) {
            return false;
        }
    }
    true
}

impl<G: PrimeGroup> ProofResult<G> {
    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.elements(&self.tally_commitments);
        self.link_proof.encode(enc);
        enc.len(self.comparisons.len());
        for c in &self.comparisons {
            c.encode(enc);
        }
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        let tally_commitments = dec.elements()?;
        let link_proof = LinkProof::decode(dec)?;
        let n = dec.len("comparisons")?;
        let comparisons = (0..n).map(|_| RangeProof::decode(dec)).collect::<Result<_, _>>()?;
        Ok(ProofResult { tally_commitments, link_proof, comparisons })
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
            tag => return Err(CodecError::UnknownTag { what: "result proof format", tag }),
        }
        let p = Self::decode(&mut dec)?;
        dec.finish()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Ristretto, Tiny23};
    use crate::params::derive_params;
    use crate::zk::nizk_setup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    struct Fixture<G: PrimeGroup> {
        pk: ProvingKey<G>,
        vk: VerifyingKey<G>,
        r: G::Scalar,
        c: Commitment<G>,
    }

    fn fixture<G: PrimeGroup>(tally: &[u64], rng: &mut ChaCha20Rng) -> Fixture<G> {
        let p = derive_params::<G>(tally.len(), b"ace-v1").unwrap();
        let (pk, vk) = nizk_setup(&p, Relation::Result);
        let r = G::random_scalar(rng);
        let c = comm_vec(&p, &VoteShare::from_u64s(tally), &r).unwrap();
        Fixture { pk, vk, r, c }
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(lowest_argmax(&[2, 1, 0]), 0);
        assert_eq!(lowest_argmax(&[2, 2]), 0);
        assert_eq!(lowest_argmax(&[1, 2]), 1);
        assert_eq!(lowest_argmax(&[0, 0, 0]), 0);
        assert_eq!(lowest_argmax(&[]), 0);
    }

    #[test]
    fn three_candidates() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let f = fixture::<Ristretto>(&[2, 1, 0], &mut rng);
        let proof = prove_result(&f.pk, &[2, 1, 0], &f.r, &f.c, 0, 3, b"e", &mut rng).unwrap();
        assert_eq!(proof.comparisons.len(), 2);
        assert!(proof.comparisons.iter().all(|c| c.bit_commitments.len() == 2));
        assert!(verify_result(&f.vk, &f.c, 0, &proof, 3, b"e"));
        assert_eq!(ProofResult::from_bytes(&proof.to_bytes()).unwrap(), proof);
        assert!(!verify_result(&f.vk, &f.c, 1, &proof, 3, b"e"));
        assert!(!verify_result(&f.vk, &f.c, 0, &proof, 4, b"e"));
        assert!(!verify_result(&f.vk, &f.c, 0, &proof, 3, b"other"));
    }

    #[test]
    fn tie_only_lower_index_provable() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let f = fixture::<Ristretto>(&[2, 2], &mut rng);
        let proof = prove_result(&f.pk, &[2, 2], &f.r, &f.c, 0, 2, b"e", &mut rng).unwrap();
        assert!(verify_result(&f.vk, &f.c, 0, &proof, 2, b"e"));
        assert!(matches!(
            prove_result(&f.pk, &[2, 2], &f.r, &f.c, 1, 2, b"e", &mut rng),
            Err(ZkError::StatementFalse(_))
        ));
    }

    #[test]
    fn wrong_winner_refused() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let f = fixture::<Ristretto>(&[1, 2], &mut rng);
        assert!(prove_result(&f.pk, &[1, 2], &f.r, &f.c, 0, 3, b"e", &mut rng).is_err());
        assert!(prove_result(&f.pk, &[1, 2], &(f.r + Ristretto::one()), &f.c, 1, 3, b"e", &mut rng).is_err());
    }

    #[test]
    fn empty_tally_provable() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let f = fixture::<Ristretto>(&[0, 0, 0, 0], &mut rng);
        let proof = prove_result(&f.pk, &[0, 0, 0, 0], &f.r, &f.c, 0, 0, b"e", &mut rng).unwrap();
        assert!(verify_result(&f.vk, &f.c, 0, &proof, 0, b"e"));
    }

    #[test]
    fn replaced_bit_commitment_rejects() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let f = fixture::<Ristretto>(&[1, 3, 2], &mut rng);
        let proof = prove_result(&f.pk, &[1, 3, 2], &f.r, &f.c, 1, 5, b"e", &mut rng).unwrap();
        assert!(verify_result(&f.vk, &f.c, 1, &proof, 5, b"e"));
        let mut bad = proof.clone();
        bad.comparisons[0].bit_commitments[1] = Ristretto::generator();
        assert!(!verify_result(&f.vk, &f.c, 1, &bad, 5, b"e"));
    }

    #[test]
    fn tiny_backend_completeness() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for a in 0..4u64 {
            for b in 0..4u64 {
                let tally = [a, b];
                let f = fixture::<Tiny23>(&tally, &mut rng);
                let w = lowest_argmax(&tally);
                let proof = prove_result(&f.pk, &tally, &f.r, &f.c, w, 6, b"e", &mut rng).unwrap();
                assert!(verify_result(&f.vk, &f.c, w, &proof, 6, b"e"));
            }
        }
    }
}
