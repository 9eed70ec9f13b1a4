use rand::RngCore;

use super::sigma::{BitProof, DlogProof};
use super::{NizkContext, ZkError, PROOF_FORMAT_V1};
use crate::codec::{CodecError, Decoder, Encoder};
use crate::group::PrimeGroup;
use crate::hash::FsTranscript;
use crate::params::GroupParams;

/// `ceil(log2(bound + 1))`: bits needed to write any value in `[0, bound]`.
pub fn bits_for(bound: u64) -> usize {
    (64 - bound.leading_zeros()) as usize
}

/// Bit-decomposition proof that `D = g^d · h^u` with `d < 2^m`.
///
/// Each bit commitment `B_i = g^{b_i} · h^{t_i}` carries a [`BitProof`];
/// the recomposition proof shows `Π B_i^{2^i} / D` is a pure power of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeProof<G: PrimeGroup> {
    pub bit_commitments: Vec<G::Element>,
    pub bit_proofs: Vec<BitProof<G>>,
    pub recomposition: DlogProof<G>,
}

fn pow2<G: PrimeGroup>(i: usize) -> G::Scalar {
    G::scalar_from_u64(1u64 << i)
}

fn recomposed<G: PrimeGroup>(bits: &[G::Element], d: &G::Element) -> G::Element {
    let exps: Vec<G::Scalar> = (0..bits.len()).map(pow2::<G>).collect();
    G::div(&G::multi_pow_vartime(bits, &exps), d)
}

impl<G: PrimeGroup> RangeProof<G> {
    pub(crate) fn prove<R: RngCore + ?Sized>(
        t: &mut FsTranscript<G>,
        params: &GroupParams<G>,
        d: &G::Element,
        value: u64,
        u: &G::Scalar,
        n_bits: usize,
        rng: &mut R,
    ) -> Self {
        let blinds: Vec<G::Scalar> = (0..n_bits).map(|_| G::random_scalar(rng)).collect();
        let bits: Vec<bool> = (0..n_bits).map(|i| (value >> i) & 1 == 1).collect();
        let bit_commitments: Vec<G::Element> = bits
            .iter()
            .zip(&blinds)
            .map(|(&b, t)| {
                let gb = if b { params.g } else { G::identity() };
                G::op(&gb, &G::pow(&params.h, t))
            })
            .collect();
        t.append_element(b"range-d", d);
        t.append_u64(b"range-bits", n_bits as u64);
        t.append_elements(b"range-b", &bit_commitments);
        let bit_proofs = bit_commitments
            .iter()
            .zip(bits.iter().zip(&blinds))
            .map(|(c, (&b, s))| BitProof::prove(t, params, c, b, s, rng))
            .collect();
        let mut combined = G::zero() - *u;
        for (i, s) in blinds.iter().enumerate() {
            combined = combined + pow2::<G>(i) * *s;
        }
        let target = recomposed::<G>(&bit_commitments, d);
        let recomposition = DlogProof::prove(t, &params.h, &target, &combined, rng);
        RangeProof { bit_commitments, bit_proofs, recomposition }
    }

    pub(crate) fn verify(&self, t: &mut FsTranscript<G>, params: &GroupParams<G>, d: &G::Element, n_bits: usize) -> bool {
        if self.bit_commitments.len() != n_bits || self.bit_proofs.len() != n_bits {
            return false;
        }
        t.append_element(b"range-d", d);
        t.append_u64(b"range-bits", n_bits as u64);
        t.append_elements(b"range-b", &self.bit_commitments);
        for (c, p) in self.bit_commitments.iter().zip(&self.bit_proofs) {
            if !p.verify(t, params, c) {
                return false;
            }
        }
        let target = recomposed::<G>(&self.bit_commitments, d);
        self.recomposition.verify(t, &params.h, &target)
    }

    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.elements(&self.bit_commitments);
        enc.len(self.bit_proofs.len());
        for p in &self.bit_proofs {
            p.encode(enc);
        }
        self.recomposition.encode(enc);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        let bit_commitments = dec.elements()?;
        let n = dec.len("bit proofs")?;
        let bit_proofs = (0..n).map(|_| BitProof::decode(dec)).collect::<Result<_, _>>()?;
        Ok(RangeProof { bit_commitments, bit_proofs, recomposition: DlogProof::decode(dec)? })
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
            tag => return Err(CodecError::UnknownTag { what: "range proof format", tag }),
        }
        let p = Self::decode(&mut dec)?;
        dec.finish()?;
        Ok(p)
    }
}

/// Proves `commitment = g^value · h^randomness` with `value <= bound`,
/// using `bits_for(bound)` bit commitments.
pub fn prove_range<G: PrimeGroup, R: RngCore + ?Sized>(
    ctx: &NizkContext<G>,
    commitment: &G::Element,
    value: u64,
    randomness: &G::Scalar,
    bound: u64,
    rng: &mut R,
) -> Result<RangeProof<G>, ZkError> {
    if value > bound {
        return Err(ZkError::StatementFalse(format!("value {value} exceeds bound {bound}")));
    }
    let p = ctx.params();
    let expected = G::op(&G::pow(&p.g, &G::scalar_from_u64(value)), &G::pow(&p.h, randomness));
    if expected != *commitment {
        return Err(ZkError::StatementFalse("commitment does not open to the value".into()));
    }
    let mut t = ctx.transcript(b"range");
    t.append_u64(b"bound", bound);
    Ok(RangeProof::prove(&mut t, p, commitment, value, randomness, bits_for(bound), rng))
}

pub fn verify_range<G: PrimeGroup>(ctx: &NizkContext<G>, commitment: &G::Element, bound: u64, proof: &RangeProof<G>) -> bool {
    let mut t = ctx.transcript(b"range");
    t.append_u64(b"bound", bound);
    proof.verify(&mut t, ctx.params(), commitment, bits_for(bound))
}
