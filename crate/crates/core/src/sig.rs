//! Schnorr signatures over the protocol group.

use rand::RngCore;

use crate::codec::{CodecError, Decoder, Encoder};
use crate::group::PrimeGroup;
use crate::hash::hash_to_scalar;

const NONCE_DOMAIN: &[u8] = b"ace/sig/nonce/v1";
const CHALLENGE_DOMAIN: &[u8] = b"ace/sig/challenge/v1";

#[derive(Clone, Debug)]
pub struct KeyPair<G: PrimeGroup> {
    sk: G::Scalar,
    pub pk: G::Element,
}

/// `(e, s)` with `e = H(pk, B^s · pk^e, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature<G: PrimeGroup> {
    pub challenge: G::Scalar,
    pub response: G::Scalar,
}

impl<G: PrimeGroup> KeyPair<G> {
    pub fn generate<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let sk = G::random_scalar(rng);
            if sk != G::zero() {
                return Self::from_secret(sk);
            }
        }
    }

    pub fn from_secret(sk: G::Scalar) -> Self {
        KeyPair { sk, pk: G::pow(&G::generator(), &sk) }
    }

    pub fn secret(&self) -> &G::Scalar {
        &self.sk
    }
}

fn challenge<G: PrimeGroup>(pk: &G::Element, commitment: &G::Element, message: &[u8]) -> G::Scalar {
    let mut enc = Encoder::<G>::new();
    enc.element(pk).element(commitment).bytes(message);
    hash_to_scalar::<G>(CHALLENGE_DOMAIN, enc.as_slice())
}

/// Signs with a nonce derived from the secret key and message, so signing
/// needs no randomness source.
pub fn sign<G: PrimeGroup>(kp: &KeyPair<G>, message: &[u8]) -> Signature<G> {
    let mut enc = Encoder::<G>::new();
    enc.scalar(&kp.sk).bytes(message);
    let mut nonce = hash_to_scalar::<G>(NONCE_DOMAIN, enc.as_slice());
    if nonce == G::zero() {
        nonce = G::one();
    }
    let commitment = G::pow(&G::generator(), &nonce);
    let e = challenge::<G>(&kp.pk, &commitment, message);
    Signature { challenge: e, response: nonce - e * kp.sk }
}

pub fn verify_sig<G: PrimeGroup>(pk: &G::Element, message: &[u8], sig: &Signature<G>) -> bool {
    let commitment = G::multi_pow_vartime(&[G::generator(), *pk], &[sig.response, sig.challenge]);
    challenge::<G>(pk, &commitment, message) == sig.challenge
}

impl<G: PrimeGroup> Signature<G> {
    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.scalar(&self.challenge).scalar(&self.response);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        Ok(Signature { challenge: dec.scalar()?, response: dec.scalar()? })
    }
}
