//! Shape-correct random proofs for soundness fuzzing and malicious provers.
//!
//! Every generator here fills each field with a uniformly random element or
//! scalar of the right length, so verifiers see well-formed but unrelated
//! transcripts.

use rand::RngCore;

use super::range::bits_for;
use super::sigma::{BitProof, DlogProof, LinkProof};
use super::{ProofResult, ProofVote, RangeProof};
use crate::group::PrimeGroup;

pub fn random_element<G: PrimeGroup, R: RngCore + ?Sized>(rng: &mut R) -> G::Element {
    G::pow(&G::generator(), &G::random_scalar(rng))
}

fn elements<G: PrimeGroup, R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Vec<G::Element> {
    (0..n).map(|_| random_element::<G, R>(rng)).collect()
}

fn scalars<G: PrimeGroup, R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Vec<G::Scalar> {
    (0..n).map(|_| G::random_scalar(rng)).collect()
}

pub fn random_dlog<G: PrimeGroup, R: RngCore + ?Sized>(rng: &mut R) -> DlogProof<G> {
    DlogProof { commitment: random_element::<G, R>(rng), response: G::random_scalar(rng) }
}

pub fn random_bit<G: PrimeGroup, R: RngCore + ?Sized>(rng: &mut R) -> BitProof<G> {
    BitProof {
        commit0: random_element::<G, R>(rng),
        commit1: random_element::<G, R>(rng),
        challenge0: G::random_scalar(rng),
        challenge1: G::random_scalar(rng),
        response0: G::random_scalar(rng),
        response1: G::random_scalar(rng),
    }
}

pub fn random_link<G: PrimeGroup, R: RngCore + ?Sized>(n: usize, rng: &mut R) -> LinkProof<G> {
    LinkProof {
        vec_commit: random_element::<G, R>(rng),
        coord_commits: elements::<G, R>(n, rng),
        resp_r: G::random_scalar(rng),
        resp_x: scalars::<G, R>(n, rng),
        resp_s: scalars::<G, R>(n, rng),
    }
}

pub fn random_range<G: PrimeGroup, R: RngCore + ?Sized>(n_bits: usize, rng: &mut R) -> RangeProof<G> {
    RangeProof {
        bit_commitments: elements::<G, R>(n_bits, rng),
        bit_proofs: (0..n_bits).map(|_| random_bit::<G, R>(rng)).collect(),
        recomposition: random_dlog::<G, R>(rng),
    }
}

pub fn random_vote_proof<G: PrimeGroup, R: RngCore + ?Sized>(n_choices: usize, rng: &mut R) -> ProofVote<G> {
    ProofVote {
        coord_commitments: elements::<G, R>(n_choices, rng),
        bit_proofs: (0..n_choices).map(|_| random_bit::<G, R>(rng)).collect(),
        sum_proof: random_dlog::<G, R>(rng),
        link_proof: random_link::<G, R>(n_choices, rng),
    }
}

pub fn random_result_proof<G: PrimeGroup, R: RngCore + ?Sized>(n_choices: usize, n_v: u64, rng: &mut R) -> ProofResult<G> {
    let m = bits_for(n_v);
    ProofResult {
        tally_commitments: elements::<G, R>(n_choices, rng),
        link_proof: random_link::<G, R>(n_choices, rng),
        comparisons: (1..n_choices).map(|_| random_range::<G, R>(m, rng)).collect(),
    }
}
