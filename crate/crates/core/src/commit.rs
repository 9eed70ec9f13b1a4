//! Pedersen vector commitments, re-randomization and vote sharding.

use rand::RngCore;

use crate::group::PrimeGroup;
use crate::params::GroupParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommitError {
    #[error("vector has {got} coordinates, parameters expect {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vote is not a one-hot choice vector")]
    InvalidVote,
    #[error("at least one share is required")]
    NoShares,
    #[error("parameters carry no trapdoor")]
    MissingTrapdoor,
}

/// A group element committing to a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Commitment<G: PrimeGroup>(pub G::Element);

impl<G: PrimeGroup> Commitment<G> {
    pub fn element(&self) -> &G::Element {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        G::element_bytes(&self.0)
    }

    /// Homomorphic addition of the committed vectors and randomness.
    pub fn combine(&self, other: &Self) -> Self {
        Commitment(G::op(&self.0, &other.0))
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        G: 'a,
    {
        items.into_iter().fold(Commitment(G::identity()), |acc, c| acc.combine(c))
    }
}

/// A candidate-indexed ballot. Valid ballots are one-hot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteVector<G: PrimeGroup> {
    pub coords: Vec<G::Scalar>,
}

impl<G: PrimeGroup> VoteVector<G> {
    pub fn one_hot(n_choices: usize, choice: usize) -> Self {
        assert!(choice < n_choices, "choice {choice} out of range");
        let coords = (0..n_choices).map(|k| if k == choice { G::one() } else { G::zero() }).collect();
        VoteVector { coords }
    }

    pub fn from_u64s(values: &[u64]) -> Self {
        VoteVector { coords: values.iter().map(|&v| G::scalar_from_u64(v)).collect() }
    }

    /// Index of the selected candidate, or `None` if not one-hot.
    pub fn choice(&self) -> Option<usize> {
        let mut found = None;
        for (k, c) in self.coords.iter().enumerate() {
            if *c == G::one() {
                if found.is_some() {
                    return None;
                }
                found = Some(k);
            } else if *c != G::zero() {
                return None;
            }
        }
        found
    }

    pub fn is_one_hot(&self) -> bool {
        self.choice().is_some()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// One additive share of a ballot; coordinates are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteShare<G: PrimeGroup> {
    pub coords: Vec<G::Scalar>,
}

impl<G: PrimeGroup> VoteShare<G> {
    pub fn zero(n: usize) -> Self {
        VoteShare { coords: vec![G::zero(); n] }
    }

    pub fn from_u64s(values: &[u64]) -> Self {
        VoteShare { coords: values.iter().map(|&v| G::scalar_from_u64(v)).collect() }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a = *a + *b;
        }
    }
}

impl<G: PrimeGroup> From<&VoteVector<G>> for VoteShare<G> {
    fn from(v: &VoteVector<G>) -> Self {
        VoteShare { coords: v.coords.clone() }
    }
}

/// A voter's per-round secrets: the ballot, its shares and their randomness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallotSecrets<G: PrimeGroup> {
    pub vote: VoteVector<G>,
    pub shares: Vec<VoteShare<G>>,
    pub randomness: Vec<G::Scalar>,
}

impl<G: PrimeGroup> BallotSecrets<G> {
    pub fn n_shares(&self) -> usize {
        self.shares.len()
    }

    pub fn total_randomness(&self) -> G::Scalar {
        self.randomness.iter().fold(G::zero(), |acc, r| acc + *r)
    }

    pub fn commitments(&self, params: &GroupParams<G>) -> Result<Vec<Commitment<G>>, CommitError> {
        self.shares
            .iter()
            .zip(&self.randomness)
            .map(|(s, r)| comm_vec(params, s, r))
            .collect()
    }

    /// Coordinate-wise sum of the shares.
    pub fn reconstruct(&self) -> VoteShare<G> {
        let n = self.vote.len();
        self.shares.iter().fold(VoteShare::zero(n), |mut acc, s| {
            acc.add_assign(s);
            acc
        })
    }
}

fn check_dim<G: PrimeGroup>(params: &GroupParams<G>, n: usize) -> Result<(), CommitError> {
    if n != params.g_vec.len() {
        return Err(CommitError::DimensionMismatch { expected: params.g_vec.len(), got: n });
    }
    Ok(())
}

/// `h^r · Π_k g_k^{v[k]}`.
pub fn comm_vec<G: PrimeGroup>(
    params: &GroupParams<G>,
    v: &VoteShare<G>,
    r: &G::Scalar,
) -> Result<Commitment<G>, CommitError> {
    check_dim(params, v.coords.len())?;
    let mut acc = G::pow(&params.h, r);
    for (g, x) in params.g_vec.iter().zip(&v.coords) {
        acc = G::op(&acc, &G::pow(g, x));
    }
    Ok(Commitment(acc))
}

/// Variable-time `comm_vec` for verifiers working on public openings.
pub(crate) fn comm_vec_vartime<G: PrimeGroup>(params: &GroupParams<G>, v: &[G::Scalar], r: &G::Scalar) -> G::Element {
    let mut bases = Vec::with_capacity(v.len() + 1);
    bases.push(params.h);
    bases.extend_from_slice(&params.g_vec[..v.len()]);
    let mut exps = Vec::with_capacity(v.len() + 1);
    exps.push(*r);
    exps.extend_from_slice(v);
    G::multi_pow_vartime(&bases, &exps)
}

/// `c · h^{r_blind}`.
pub fn rerand<G: PrimeGroup>(params: &GroupParams<G>, c: &Commitment<G>, r_blind: &G::Scalar) -> Commitment<G> {
    Commitment(G::op(&c.0, &G::pow(&params.h, r_blind)))
}

/// `c' · h^{-r_blind}`; undoes [`rerand`] with the same factor.
pub fn derand<G: PrimeGroup>(params: &GroupParams<G>, c_blinded: &Commitment<G>, r_blind: &G::Scalar) -> Commitment<G> {
    Commitment(G::op(&c_blinded.0, &G::pow(&params.h, &-*r_blind)))
}

/// Splits a one-hot ballot into `n_t` additive shares with fresh randomness.
///
/// The first `n_t - 1` shares are uniform; the last one fixes the sum.
pub fn share_vote<G: PrimeGroup, R: RngCore + ?Sized>(
    v: &VoteVector<G>,
    n_t: usize,
    rng: &mut R,
) -> Result<BallotSecrets<G>, CommitError> {
    if !v.is_one_hot() {
        return Err(CommitError::InvalidVote);
    }
    share_any(v, n_t, rng)
}

/// Sharding without the one-hot check. Used by adversarial voters.
pub fn share_any<G: PrimeGroup, R: RngCore + ?Sized>(
    v: &VoteVector<G>,
    n_t: usize,
    rng: &mut R,
) -> Result<BallotSecrets<G>, CommitError> {
    if n_t == 0 {
        return Err(CommitError::NoShares);
    }
    let n = v.len();
    let mut shares = Vec::with_capacity(n_t);
    let mut last = VoteShare { coords: v.coords.clone() };
    for _ in 1..n_t {
        let s = VoteShare { coords: (0..n).map(|_| G::random_scalar(rng)).collect::<Vec<_>>() };
        for (l, x) in last.coords.iter_mut().zip(&s.coords) {
            *l = *l - *x;
        }
        shares.push(s);
    }
    shares.push(last);
    let randomness = (0..n_t).map(|_| G::random_scalar(rng)).collect();
    Ok(BallotSecrets { vote: v.clone(), shares, randomness })
}

/// Equivocates a re-randomized commitment using the trapdoor.
///
/// Given the real opening `(v, r, r̃)` of `c̃ = rerand(comm_vec(v, r), r̃)`
/// and any fake `(v', r')`, returns `r̃'` with
/// `c̃ = rerand(comm_vec(v', r'), r̃')`:
/// `r̃' = (r + r̃ - r') + Σ_k (v[k] - v'[k]) · λ_k`.
pub fn forge_rerand_witness<G: PrimeGroup>(
    params: &GroupParams<G>,
    fake_share: &VoteShare<G>,
    fake_r: &G::Scalar,
    real_share: &VoteShare<G>,
    real_r: &G::Scalar,
    real_rtilde: &G::Scalar,
) -> Result<G::Scalar, CommitError> {
    let td = params.trapdoor.as_ref().ok_or(CommitError::MissingTrapdoor)?;
    check_dim(params, fake_share.coords.len())?;
    check_dim(params, real_share.coords.len())?;
    let mut out = *real_r + *real_rtilde - *fake_r;
    for ((v, fv), lambda) in real_share.coords.iter().zip(&fake_share.coords).zip(&td.lambdas) {
        out = out + (*v - *fv) * *lambda;
    }
    Ok(out)
}
