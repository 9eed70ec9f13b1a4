use crate::codec::Encoder;
use crate::group::{Backend, GroupError, PrimeGroup};
use crate::hash::digest;

/// Discrete logs `λ_k = log_h g_k` and `λ_g = log_h g`.
///
/// Only the tiny test backend can produce one; production generators are
/// hash-derived and nobody knows these values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trapdoor<G: PrimeGroup> {
    pub lambdas: Vec<G::Scalar>,
    pub lambda_g: G::Scalar,
}

/// Public commitment parameters `(G, q, h, g_1..g_n, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupParams<G: PrimeGroup> {
    pub backend: Backend,
    pub h: G::Element,
    pub g_vec: Vec<G::Element>,
    pub g: G::Element,
    pub domain_tag: Vec<u8>,
    pub trapdoor: Option<Trapdoor<G>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("derived generators are not pairwise distinct")]
    DegenerateGenerators,
}

/// Derives the election's commitment parameters. Deterministic in its inputs.
pub fn derive_params<G: PrimeGroup>(n_choices: usize, domain_tag: &[u8]) -> Result<GroupParams<G>, ParamsError> {
    let gens = G::setup_generators(n_choices, domain_tag)?;
    let mut all = vec![gens.h, gens.g];
    all.extend(gens.g_vec.iter().copied());
    for (i, a) in all.iter().enumerate() {
        if *a == G::identity() || all[i + 1..].contains(a) {
            return Err(ParamsError::DegenerateGenerators);
        }
    }
    Ok(GroupParams {
        backend: G::BACKEND,
        h: gens.h,
        g_vec: gens.g_vec,
        g: gens.g,
        domain_tag: domain_tag.to_vec(),
        trapdoor: gens.trapdoor.map(|(lambdas, lambda_g)| Trapdoor { lambdas, lambda_g }),
    })
}

impl<G: PrimeGroup> GroupParams<G> {
    pub fn n_choices(&self) -> usize {
        self.g_vec.len()
    }

    pub fn q_be_bytes(&self) -> Vec<u8> {
        G::order_be_bytes()
    }

    /// Hash of the public part of the parameters (the trapdoor is excluded).
    pub fn params_hash(&self) -> [u8; 32] {
        let mut enc = Encoder::<G>::new();
        enc.u8(self.backend.id())
            .bytes(&G::order_be_bytes())
            .bytes(&self.domain_tag)
            .element(&self.h)
            .elements(&self.g_vec)
            .element(&self.g);
        digest(b"ace/params/v1", enc.as_slice())
    }

    /// Largest voter count for which tally coordinates cannot wrap mod `q`.
    pub fn max_voters(&self) -> u64 {
        G::order_u64().map(|q| q - 1).unwrap_or(u64::MAX)
    }
}
