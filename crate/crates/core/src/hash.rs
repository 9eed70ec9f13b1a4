//! Domain-separated hashing into the scalar field and the Fiat-Shamir
//! transcript used by every proof.

use std::marker::PhantomData;

use sha2::{Digest, Sha256, Sha512};

use crate::group::PrimeGroup;

/// SHA-512 of `(len(domain) || domain || transcript)`, reduced mod `q`.
///
/// The 512-bit wide reduction keeps the bias below `2^-250` for the
/// production group.
pub fn hash_to_scalar<G: PrimeGroup>(domain: &[u8], transcript: &[u8]) -> G::Scalar {
    let mut h = Sha512::new();
    h.update((domain.len() as u64).to_be_bytes());
    h.update(domain);
    h.update(transcript);
    let out: [u8; 64] = h.finalize().into();
    G::scalar_from_wide(&out)
}

/// SHA-256 with a length-prefixed domain label.
pub fn digest(domain: &[u8], data: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((domain.len() as u64).to_be_bytes());
    h.update(domain);
    h.update(data);
    h.finalize().into()
}

/// Append-only Fiat-Shamir transcript.
///
/// Each challenge hashes everything absorbed so far and is then absorbed
/// itself, so later challenges depend on earlier ones.
#[derive(Clone, Debug)]
pub struct FsTranscript<G> {
    domain: Vec<u8>,
    buf: Vec<u8>,
    _group: PhantomData<G>,
}

impl<G: PrimeGroup> FsTranscript<G> {
    pub fn new(domain: &[u8]) -> Self {
        FsTranscript { domain: domain.to_vec(), buf: Vec::new(), _group: PhantomData }
    }

    fn label(&mut self, label: &[u8]) {
        self.buf.push(label.len() as u8);
        self.buf.extend_from_slice(label);
    }

    pub fn append_bytes(&mut self, label: &[u8], bytes: &[u8]) {
        self.label(label);
        self.buf.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
        self.buf.extend_from_slice(bytes);
    }

    pub fn append_u64(&mut self, label: &[u8], v: u64) {
        self.label(label);
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    pub fn append_element(&mut self, label: &[u8], e: &G::Element) {
        self.label(label);
        G::encode_element(e, &mut self.buf);
    }

    pub fn append_elements(&mut self, label: &[u8], es: &[G::Element]) {
        self.append_u64(label, es.len() as u64);
        for e in es {
            G::encode_element(e, &mut self.buf);
        }
    }

    pub fn append_scalar(&mut self, label: &[u8], s: &G::Scalar) {
        self.label(label);
        G::encode_scalar(s, &mut self.buf);
    }

    pub fn challenge(&mut self, label: &[u8]) -> G::Scalar {
        self.label(label);
        let c = hash_to_scalar::<G>(&self.domain, &self.buf);
        G::encode_scalar(&c, &mut self.buf);
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Ristretto, Tiny23};

    #[test]
    fn deterministic() {
        let a = hash_to_scalar::<Ristretto>(b"d", b"t");
        let b = hash_to_scalar::<Ristretto>(b"d", b"t");
        assert_eq!(a, b);
    }

    #[test]
    fn domains_separate() {
        let mut collisions = 0;
        for i in 0u32..1000 {
            let t = i.to_be_bytes();
            if hash_to_scalar::<Ristretto>(b"ace/a", &t) == hash_to_scalar::<Ristretto>(b"ace/b", &t) {
                collisions += 1;
            }
        }
        assert_eq!(collisions, 0);
    }

    #[test]
    fn domain_length_prefix_prevents_shifting() {
        assert_ne!(
            hash_to_scalar::<Ristretto>(b"ab", b"c"),
            hash_to_scalar::<Ristretto>(b"a", b"bc")
        );
    }

    #[test]
    fn tiny_output_in_range() {
        for i in 0u32..500 {
            let s = hash_to_scalar::<Tiny23>(b"r", &i.to_be_bytes());
            assert!(s.value() < 11);
        }
    }

    #[test]
    fn transcript_challenges_chain() {
        let mut t1 = FsTranscript::<Ristretto>::new(b"x");
        t1.append_u64(b"n", 1);
        let c1 = t1.challenge(b"c");
        let c2 = t1.challenge(b"c");
        assert_ne!(c1, c2);

        let mut t2 = FsTranscript::<Ristretto>::new(b"x");
        t2.append_u64(b"n", 2);
        assert_ne!(t2.challenge(b"c"), c1);
    }
}
