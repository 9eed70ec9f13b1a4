//! Prime-order group backends.
//!
//! Everything above this module is written against [`PrimeGroup`], using
//! multiplicative notation: `op` is the group operation, `pow` raises an
//! element to a scalar exponent. Two backends exist:
//!
//! * [`Ristretto`]: the Ristretto255 group (order ~2^252), used for real runs.
//! * [`Tiny23`]: the order-11 subgroup of the integers mod 23. Every value is
//!   small enough to check by hand and the discrete logs of its generators are
//!   known, which is what the equivocation tests need. It provides no security.

mod ristretto;
mod tiny;

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;
use serde::{Deserialize, Serialize};

pub use ristretto::Ristretto;
pub use tiny::{Tiny23, TinyElement, TinyScalar};

/// Which concrete group a set of parameters (or a transcript) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Production,
    TinyTest,
}

impl Backend {
    pub fn id(self) -> u8 {
        match self {
            Backend::Production => 1,
            Backend::TinyTest => 2,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Backend::Production),
            2 => Some(Backend::TinyTest),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Production => "production",
            Backend::TinyTest => "tiny_test",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "production" => Ok(Backend::Production),
            "tiny_test" | "tiny" => Ok(Backend::TinyTest),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

/// Generators produced by a backend for a given number of choices.
#[derive(Clone, Debug)]
pub struct Generators<G: PrimeGroup> {
    pub h: G::Element,
    pub g_vec: Vec<G::Element>,
    pub g: G::Element,
    /// `(log_h g_1 .. log_h g_n, log_h g)`, only ever populated by [`Tiny23`].
    pub trapdoor: Option<(Vec<G::Scalar>, G::Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("backend {backend} supports between 2 and {max} choices, got {requested}")]
    UnsupportedChoices {
        backend: Backend,
        requested: usize,
        max: usize,
    },
}

/// A cyclic group of prime order `q` together with its scalar field.
///
/// Implementors are zero-sized marker types; all methods are associated
/// functions so that `GroupParams<G>` and friends carry no backend state.
pub trait PrimeGroup: Copy + Clone + Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    type Scalar: Copy
        + Clone
        + Debug
        + PartialEq
        + Eq
        + Send
        + Sync
        + Add<Output = Self::Scalar>
        + Sub<Output = Self::Scalar>
        + Mul<Output = Self::Scalar>
        + Neg<Output = Self::Scalar>;
    type Element: Copy + Clone + Debug + PartialEq + Eq + Send + Sync;

    const BACKEND: Backend;
    /// Width of the canonical big-endian scalar encoding.
    const SCALAR_BYTES: usize;
    /// Width of the canonical element encoding.
    const ELEMENT_BYTES: usize;

    /// Big-endian bytes of the group order `q`.
    fn order_be_bytes() -> Vec<u8>;
    /// `q` when it fits in a `u64`.
    fn order_u64() -> Option<u64>;

    fn scalar_from_u64(v: u64) -> Self::Scalar;
    /// The integer in `[0, q)` represented by `s`, when it fits in a `u64`.
    fn scalar_to_u64(s: &Self::Scalar) -> Option<u64>;
    /// Reduces a 512-bit big-endian integer mod `q`.
    fn scalar_from_wide(bytes: &[u8; 64]) -> Self::Scalar;
    fn random_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Self::Scalar {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Self::scalar_from_wide(&wide)
    }
    fn zero() -> Self::Scalar {
        Self::scalar_from_u64(0)
    }
    fn one() -> Self::Scalar {
        Self::scalar_from_u64(1)
    }
    fn encode_scalar(s: &Self::Scalar, out: &mut Vec<u8>);
    /// Rejects non-canonical encodings (values `>= q`).
    fn decode_scalar(bytes: &[u8]) -> Option<Self::Scalar>;

    fn identity() -> Self::Element;
    /// Fixed public generator, used as the signature base.
    fn generator() -> Self::Element;
    fn op(a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(a: &Self::Element) -> Self::Element;
    fn pow(base: &Self::Element, exp: &Self::Scalar) -> Self::Element;
    /// `Π bases[i]^exps[i]` over public data; may run in variable time.
    fn multi_pow_vartime(bases: &[Self::Element], exps: &[Self::Scalar]) -> Self::Element {
        bases
            .iter()
            .zip(exps)
            .fold(Self::identity(), |acc, (b, e)| Self::op(&acc, &Self::pow(b, e)))
    }
    fn encode_element(e: &Self::Element, out: &mut Vec<u8>);
    /// Rejects encodings outside the order-`q` subgroup.
    fn decode_element(bytes: &[u8]) -> Option<Self::Element>;

    /// Derives `h, g_1..g_n, g` for `n_choices` candidates.
    fn setup_generators(n_choices: usize, domain_tag: &[u8]) -> Result<Generators<Self>, GroupError>;

    fn div(a: &Self::Element, b: &Self::Element) -> Self::Element {
        Self::op(a, &Self::inverse(b))
    }

    fn scalar_bytes(s: &Self::Scalar) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::SCALAR_BYTES);
        Self::encode_scalar(s, &mut out);
        out
    }

    fn element_bytes(e: &Self::Element) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ELEMENT_BYTES);
        Self::encode_element(e, &mut out);
        out
    }
}
