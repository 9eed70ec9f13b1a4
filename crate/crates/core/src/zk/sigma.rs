//! Sigma-protocol building blocks, made non-interactive over a shared
//! [`FsTranscript`].

use rand::RngCore;

use crate::codec::{CodecError, Decoder, Encoder};
use crate::group::PrimeGroup;
use crate::hash::FsTranscript;
use crate::params::GroupParams;

/// Proof of knowledge of `x` with `target = base^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlogProof<G: PrimeGroup> {
    pub commitment: G::Element,
    pub response: G::Scalar,
}

impl<G: PrimeGroup> DlogProof<G> {
    pub fn prove<R: RngCore + ?Sized>(
        t: &mut FsTranscript<G>,
        base: &G::Element,
        target: &G::Element,
        witness: &G::Scalar,
        rng: &mut R,
    ) -> Self {
        let a = G::random_scalar(rng);
        let commitment = G::pow(base, &a);
        t.append_element(b"dlog-target", target);
        t.append_element(b"dlog-commit", &commitment);
        let ch = t.challenge(b"dlog-challenge");
        DlogProof { commitment, response: a + ch * *witness }
    }

    pub fn verify(&self, t: &mut FsTranscript<G>, base: &G::Element, target: &G::Element) -> bool {
        t.append_element(b"dlog-target", target);
        t.append_element(b"dlog-commit", &self.commitment);
        let ch = t.challenge(b"dlog-challenge");
        self.verify_with_challenge(base, target, &ch)
    }

    /// The interactive verification equation `base^z = A · target^ch`.
    pub fn verify_with_challenge(&self, base: &G::Element, target: &G::Element, ch: &G::Scalar) -> bool {
        G::pow(base, &self.response) == G::op(&self.commitment, &G::pow(target, ch))
    }

    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.element(&self.commitment).scalar(&self.response);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        Ok(DlogProof { commitment: dec.element()?, response: dec.scalar()? })
    }
}

/// Disjunctive proof that `C = g^b · h^s` with `b ∈ {0, 1}`.
///
/// Branch `i` proves knowledge of `log_h(C / g^i)`; the branch challenges
/// must sum to the transcript challenge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitProof<G: PrimeGroup> {
    pub commit0: G::Element,
    pub commit1: G::Element,
    pub challenge0: G::Scalar,
    pub challenge1: G::Scalar,
    pub response0: G::Scalar,
    pub response1: G::Scalar,
}

pub(crate) fn bit_targets<G: PrimeGroup>(params: &GroupParams<G>, c: &G::Element) -> [G::Element; 2] {
    [*c, G::div(c, &params.g)]
}

impl<G: PrimeGroup> BitProof<G> {
    /// `bit` must be 0 or 1 and `c = g^bit · h^s`; callers check this.
    pub(crate) fn prove<R: RngCore + ?Sized>(
        t: &mut FsTranscript<G>,
        params: &GroupParams<G>,
        c: &G::Element,
        bit: bool,
        s: &G::Scalar,
        rng: &mut R,
    ) -> Self {
        let targets = bit_targets(params, c);
        let real = bit as usize;
        let fake = 1 - real;
        let sim_ch = G::random_scalar(rng);
        let sim_z = G::random_scalar(rng);
        let sim_commit = G::op(&G::pow(&params.h, &sim_z), &G::pow(&targets[fake], &-sim_ch));
        let a = G::random_scalar(rng);
        let real_commit = G::pow(&params.h, &a);

        let mut commits = [G::identity(); 2];
        commits[real] = real_commit;
        commits[fake] = sim_commit;
        t.append_element(b"bit-c", c);
        t.append_element(b"bit-a0", &commits[0]);
        t.append_element(b"bit-a1", &commits[1]);
        let ch = t.challenge(b"bit-challenge");

        let real_ch = ch - sim_ch;
        let mut chs = [G::zero(); 2];
        let mut zs = [G::zero(); 2];
        chs[real] = real_ch;
        chs[fake] = sim_ch;
        zs[real] = a + real_ch * *s;
        zs[fake] = sim_z;
        BitProof {
            commit0: commits[0],
            commit1: commits[1],
            challenge0: chs[0],
            challenge1: chs[1],
            response0: zs[0],
            response1: zs[1],
        }
    }

    pub(crate) fn verify(&self, t: &mut FsTranscript<G>, params: &GroupParams<G>, c: &G::Element) -> bool {
        t.append_element(b"bit-c", c);
        t.append_element(b"bit-a0", &self.commit0);
        t.append_element(b"bit-a1", &self.commit1);
        let ch = t.challenge(b"bit-challenge");
        self.verify_with_challenge(params, c, &ch)
    }

    pub fn verify_with_challenge(&self, params: &GroupParams<G>, c: &G::Element, ch: &G::Scalar) -> bool {
        if self.challenge0 + self.challenge1 != *ch {
            return false;
        }
        let [y0, y1] = bit_targets(params, c);
        let lhs0 = G::pow(&params.h, &self.response0);
        let lhs1 = G::pow(&params.h, &self.response1);
        lhs0 == G::op(&self.commit0, &G::pow(&y0, &self.challenge0))
            && lhs1 == G::op(&self.commit1, &G::pow(&y1, &self.challenge1))
    }

    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.element(&self.commit0)
            .element(&self.commit1)
            .scalar(&self.challenge0)
            .scalar(&self.challenge1)
            .scalar(&self.response0)
            .scalar(&self.response1);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        Ok(BitProof {
            commit0: dec.element()?,
            commit1: dec.element()?,
            challenge0: dec.scalar()?,
            challenge1: dec.scalar()?,
            response0: dec.scalar()?,
            response1: dec.scalar()?,
        })
    }
}

/// AND-proof that a vector commitment `C = h^r · Π g_k^{x_k}` and the
/// per-coordinate commitments `E_k = g^{x_k} · h^{s_k}` open to the same `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkProof<G: PrimeGroup> {
    pub vec_commit: G::Element,
    pub coord_commits: Vec<G::Element>,
    pub resp_r: G::Scalar,
    pub resp_x: Vec<G::Scalar>,
    pub resp_s: Vec<G::Scalar>,
}

pub(crate) struct LinkWitness<'a, G: PrimeGroup> {
    pub x: &'a [G::Scalar],
    pub r: G::Scalar,
    pub s: &'a [G::Scalar],
}

impl<G: PrimeGroup> LinkProof<G> {
    pub(crate) fn prove<R: RngCore + ?Sized>(
        t: &mut FsTranscript<G>,
        params: &GroupParams<G>,
        c: &G::Element,
        e: &[G::Element],
        w: LinkWitness<'_, G>,
        rng: &mut R,
    ) -> Self {
        let n = w.x.len();
        let a_r = G::random_scalar(rng);
        let a_x: Vec<G::Scalar> = (0..n).map(|_| G::random_scalar(rng)).collect();
        let b_s: Vec<G::Scalar> = (0..n).map(|_| G::random_scalar(rng)).collect();
        let mut vec_commit = G::pow(&params.h, &a_r);
        for (g, a) in params.g_vec.iter().zip(&a_x) {
            vec_commit = G::op(&vec_commit, &G::pow(g, a));
        }
        let coord_commits: Vec<G::Element> = a_x
            .iter()
            .zip(&b_s)
            .map(|(a, b)| G::op(&G::pow(&params.g, a), &G::pow(&params.h, b)))
            .collect();

        let ch = Self::challenge(t, c, e, &vec_commit, &coord_commits);
        LinkProof {
            vec_commit,
            coord_commits,
            resp_r: a_r + ch * w.r,
            resp_x: a_x.iter().zip(w.x).map(|(a, x)| *a + ch * *x).collect(),
            resp_s: b_s.iter().zip(w.s).map(|(b, s)| *b + ch * *s).collect(),
        }
    }

    fn challenge(
        t: &mut FsTranscript<G>,
        c: &G::Element,
        e: &[G::Element],
        vec_commit: &G::Element,
        coord_commits: &[G::Element],
    ) -> G::Scalar {
        t.append_element(b"link-c", c);
        t.append_elements(b"link-e", e);
        t.append_element(b"link-a", vec_commit);
        t.append_elements(b"link-b", coord_commits);
        t.challenge(b"link-challenge")
    }

    pub(crate) fn verify(&self, t: &mut FsTranscript<G>, params: &GroupParams<G>, c: &G::Element, e: &[G::Element]) -> bool {
        let n = e.len();
        if n != params.g_vec.len()
            || self.coord_commits.len() != n
            || self.resp_x.len() != n
            || self.resp_s.len() != n
        {
            return false;
        }
        let ch = Self::challenge(t, c, e, &self.vec_commit, &self.coord_commits);
        self.verify_with_challenge(params, c, e, &ch)
    }

    pub fn verify_with_challenge(&self, params: &GroupParams<G>, c: &G::Element, e: &[G::Element], ch: &G::Scalar) -> bool {
        let lhs = crate::commit::comm_vec_vartime(params, &self.resp_x, &self.resp_r);
        if lhs != G::op(&self.vec_commit, &G::pow(c, ch)) {
            return false;
        }
        for k in 0..e.len() {
            let lhs = G::multi_pow_vartime(&[params.g, params.h], &[self.resp_x[k], self.resp_s[k]]);
            if lhs != G::op(&self.coord_commits[k], &G::pow(&e[k], ch)) {
                return false;
            }
        }
        true
    }

    pub fn encode(&self, enc: &mut Encoder<G>) {
        enc.element(&self.vec_commit)
            .elements(&self.coord_commits)
            .scalar(&self.resp_r)
            .scalars(&self.resp_x)
            .scalars(&self.resp_s);
    }

    pub fn decode(dec: &mut Decoder<'_, G>) -> Result<Self, CodecError> {
        Ok(LinkProof {
            vec_commit: dec.element()?,
            coord_commits: dec.elements()?,
            resp_r: dec.scalar()?,
            resp_x: dec.scalars()?,
            resp_s: dec.scalars()?,
        })
    }
}
