//! Canonical byte encoding shared by hashing, signing, proofs and persistence.
//!
//! Integers are fixed-width big-endian, scalars and elements use the
//! backend's canonical encodings, variable-length data is prefixed with a
//! `u32` length. Decoding is strict: trailing bytes and non-canonical values
//! are errors.

use std::marker::PhantomData;

use crate::group::PrimeGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("unexpected end of input while reading {0}")]
    Truncated(&'static str),
    #[error("non-canonical {0}")]
    NonCanonical(&'static str),
    #[error("{0} trailing bytes")]
    Trailing(usize),
    #[error("unknown tag {tag} for {what}")]
    UnknownTag { what: &'static str, tag: u8 },
    #[error("{what} length {len} exceeds limit")]
    TooLong { what: &'static str, len: usize },
}

/// Collections in decoded data are capped to keep corrupt files from
/// triggering huge allocations.
const MAX_LEN: usize = 1 << 24;

pub struct Encoder<G> {
    buf: Vec<u8>,
    _group: PhantomData<G>,
}

impl<G: PrimeGroup> Default for Encoder<G> {
    fn default() -> Self {
        Self::new()
    }
}

impl<G: PrimeGroup> Encoder<G> {
    pub fn new() -> Self {
        Encoder { buf: Vec::new(), _group: PhantomData }
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn bool(&mut self, v: bool) -> &mut Self {
        self.u8(v as u8)
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn len(&mut self, n: usize) -> &mut Self {
        self.u32(n as u32)
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.len(b.len());
        self.buf.extend_from_slice(b);
        self
    }

    pub fn fixed(&mut self, b: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(b);
        self
    }

    pub fn scalar(&mut self, s: &G::Scalar) -> &mut Self {
        G::encode_scalar(s, &mut self.buf);
        self
    }

    pub fn scalars(&mut self, s: &[G::Scalar]) -> &mut Self {
        self.len(s.len());
        for x in s {
            self.scalar(x);
        }
        self
    }

    pub fn element(&mut self, e: &G::Element) -> &mut Self {
        G::encode_element(e, &mut self.buf);
        self
    }

    pub fn elements(&mut self, e: &[G::Element]) -> &mut Self {
        self.len(e.len());
        for x in e {
            self.element(x);
        }
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.buf
    }
}

pub struct Decoder<'a, G> {
    data: &'a [u8],
    pos: usize,
    _group: PhantomData<G>,
}

impl<'a, G: PrimeGroup> Decoder<'a, G> {
    pub fn new(data: &'a [u8]) -> Self {
        Decoder { data, pos: 0, _group: PhantomData }
    }

    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8], CodecError> {
        if self.data.len() - self.pos < n {
            return Err(CodecError::Truncated(what));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1, "u8")?[0])
    }

    pub fn bool(&mut self) -> Result<bool, CodecError> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(CodecError::NonCanonical("bool")),
        }
    }

    pub fn u32(&mut self) -> Result<u32, CodecError> {
        let b = self.take(4, "u32")?;
        Ok(u32::from_be_bytes(b.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64, CodecError> {
        let b = self.take(8, "u64")?;
        Ok(u64::from_be_bytes(b.try_into().expect("8 bytes")))
    }

    pub fn len(&mut self, what: &'static str) -> Result<usize, CodecError> {
        let n = self.u32()? as usize;
        if n > MAX_LEN {
            return Err(CodecError::TooLong { what, len: n });
        }
        Ok(n)
    }

    pub fn bytes(&mut self) -> Result<Vec<u8>, CodecError> {
        let n = self.len("bytes")?;
        Ok(self.take(n, "bytes")?.to_vec())
    }

    pub fn fixed<const N: usize>(&mut self) -> Result<[u8; N], CodecError> {
        Ok(self.take(N, "fixed bytes")?.try_into().expect("N bytes"))
    }

    pub fn scalar(&mut self) -> Result<G::Scalar, CodecError> {
        let b = self.take(G::SCALAR_BYTES, "scalar")?;
        G::decode_scalar(b).ok_or(CodecError::NonCanonical("scalar"))
    }

    pub fn scalars(&mut self) -> Result<Vec<G::Scalar>, CodecError> {
        let n = self.len("scalar list")?;
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn element(&mut self) -> Result<G::Element, CodecError> {
        let b = self.take(G::ELEMENT_BYTES, "element")?;
        G::decode_element(b).ok_or(CodecError::NonCanonical("element"))
    }

    pub fn elements(&mut self) -> Result<Vec<G::Element>, CodecError> {
        let n = self.len("element list")?;
        (0..n).map(|_| self.element()).collect()
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn finish(self) -> Result<(), CodecError> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(CodecError::Trailing(n)),
        }
    }
}
