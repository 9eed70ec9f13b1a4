use curve25519_dalek::constants::RISTRETTO_BASEPOINT_POINT;
use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint};
use curve25519_dalek::scalar::Scalar;
use curve25519_dalek::traits::{Identity, VartimeMultiscalarMul};
use sha2::Sha512;

use super::{Backend, GroupError, Generators, PrimeGroup};

/// Upper bound on candidates for the production backend; generators are
/// cheap to derive, this only keeps proof sizes sane.
const MAX_CHOICES: usize = 256;

/// The Ristretto255 prime-order group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ristretto;

fn hash_point(domain_tag: &[u8], label: &[u8], index: u64) -> RistrettoPoint {
    let mut msg = Vec::with_capacity(domain_tag.len() + label.len() + 24);
    msg.extend_from_slice(b"ace/hash-to-group/v1");
    msg.extend_from_slice(&(domain_tag.len() as u64).to_be_bytes());
    msg.extend_from_slice(domain_tag);
    msg.extend_from_slice(&(label.len() as u64).to_be_bytes());
    msg.extend_from_slice(label);
    msg.extend_from_slice(&index.to_be_bytes());
    RistrettoPoint::hash_from_bytes::<Sha512>(&msg)
}

impl PrimeGroup for Ristretto {
    type Scalar = Scalar;
    type Element = RistrettoPoint;

    const BACKEND: Backend = Backend::Production;
    const SCALAR_BYTES: usize = 32;
    const ELEMENT_BYTES: usize = 32;

    fn order_be_bytes() -> Vec<u8> {
        // q = (q - 1) + 1, computed from the field's own -1.
        let mut b = (-Scalar::ONE).to_bytes();
        for byte in b.iter_mut() {
            let (v, carry) = byte.overflowing_add(1);
            *byte = v;
            if !carry {
                break;
            }
        }
        b.reverse();
        b.to_vec()
    }

    fn order_u64() -> Option<u64> {
        None
    }

    fn scalar_from_u64(v: u64) -> Scalar {
        Scalar::from(v)
    }

    fn scalar_to_u64(s: &Scalar) -> Option<u64> {
        let b = s.as_bytes();
        if b[8..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut lo = [0u8; 8];
        lo.copy_from_slice(&b[..8]);
        Some(u64::from_le_bytes(lo))
    }

    fn scalar_from_wide(bytes: &[u8; 64]) -> Scalar {
        let mut le = *bytes;
        le.reverse();
        Scalar::from_bytes_mod_order_wide(&le)
    }

    fn encode_scalar(s: &Scalar, out: &mut Vec<u8>) {
        let mut b = s.to_bytes();
        b.reverse();
        out.extend_from_slice(&b);
    }

    fn decode_scalar(bytes: &[u8]) -> Option<Scalar> {
        let mut le: [u8; 32] = bytes.try_into().ok()?;
        le.reverse();
        Option::from(Scalar::from_canonical_bytes(le))
    }

    fn identity() -> RistrettoPoint {
        RistrettoPoint::identity()
    }

    fn generator() -> RistrettoPoint {
        RISTRETTO_BASEPOINT_POINT
    }

    fn op(a: &RistrettoPoint, b: &RistrettoPoint) -> RistrettoPoint {
        a + b
    }

    fn inverse(a: &RistrettoPoint) -> RistrettoPoint {
        -a
    }

    fn pow(base: &RistrettoPoint, exp: &Scalar) -> RistrettoPoint {
        base * exp
    }

    fn multi_pow_vartime(bases: &[RistrettoPoint], exps: &[Scalar]) -> RistrettoPoint {
        RistrettoPoint::vartime_multiscalar_mul(exps, bases)
    }

    fn encode_element(e: &RistrettoPoint, out: &mut Vec<u8>) {
        out.extend_from_slice(e.compress().as_bytes());
    }

    fn decode_element(bytes: &[u8]) -> Option<RistrettoPoint> {
        CompressedRistretto::from_slice(bytes).ok()?.decompress()
    }

    fn setup_generators(n_choices: usize, domain_tag: &[u8]) -> Result<Generators<Self>, GroupError> {
        if !(2..=MAX_CHOICES).contains(&n_choices) {
            return Err(GroupError::UnsupportedChoices {
                backend: Backend::Production,
                requested: n_choices,
                max: MAX_CHOICES,
            });
        }
        Ok(Generators {
            h: hash_point(domain_tag, b"h", 0),
            g_vec: (0..n_choices as u64).map(|k| hash_point(domain_tag, b"g_k", k)).collect(),
            g: hash_point(domain_tag, b"g", 0),
            trapdoor: None,
        })
    }
}
