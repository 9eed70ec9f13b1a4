//! Honest-verifier simulators: accepting transcripts for a chosen challenge,
//! produced without the witness.

use rand::RngCore;

use super::sigma::{bit_targets, BitProof, DlogProof};
use crate::group::PrimeGroup;
use crate::params::GroupParams;

/// Simulated `DlogProof` for `target = base^x` under challenge `ch`.
pub fn simulate_dlog<G: PrimeGroup, R: RngCore + ?Sized>(
    base: &G::Element,
    target: &G::Element,
    ch: &G::Scalar,
    rng: &mut R,
) -> DlogProof<G> {
    let response = G::random_scalar(rng);
    let commitment = G::op(&G::pow(base, &response), &G::pow(target, &-*ch));
    DlogProof { commitment, response }
}

/// Simulated `BitProof` for `c` under challenge `ch`; both branches are simulated.
pub fn simulate_bit<G: PrimeGroup, R: RngCore + ?Sized>(
    params: &GroupParams<G>,
    c: &G::Element,
    ch: &G::Scalar,
    rng: &mut R,
) -> BitProof<G> {
    let [y0, y1] = bit_targets(params, c);
    let challenge0 = G::random_scalar(rng);
    let challenge1 = *ch - challenge0;
    let b0 = simulate_dlog::<G, R>(&params.h, &y0, &challenge0, rng);
    let b1 = simulate_dlog::<G, R>(&params.h, &y1, &challenge1, rng);
    BitProof {
        commit0: b0.commitment,
        commit1: b1.commitment,
        challenge0,
        challenge1,
        response0: b0.response,
        response1: b1.response,
    }
}
