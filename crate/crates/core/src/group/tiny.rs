use std::ops::{Add, Mul, Neg, Sub};

use super::{Backend, GroupError, Generators, PrimeGroup};

const P: u64 = 23;
const Q: u64 = 11;

/// Blinding generator `h`; every other generator is a known power of it.
const H: u8 = 3;
/// Auxiliary generator `g = 3^7`.
const AUX: u8 = 2;
/// Candidate generators `g_1, g_2, ...` in allocation order.
const CANDIDATES: [u8; 8] = [4, 9, 6, 8, 12, 13, 16, 18];

/// Scalar in `Z_11`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TinyScalar(u8);

impl TinyScalar {
    pub fn new(v: u64) -> Self {
        TinyScalar((v % Q) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl Add for TinyScalar {
    type Output = TinyScalar;
    fn add(self, rhs: Self) -> Self {
        TinyScalar::new(self.0 as u64 + rhs.0 as u64)
    }
}

impl Sub for TinyScalar {
    type Output = TinyScalar;
    fn sub(self, rhs: Self) -> Self {
        TinyScalar::new(self.0 as u64 + Q - rhs.0 as u64)
    }
}

impl Mul for TinyScalar {
    type Output = TinyScalar;
    fn mul(self, rhs: Self) -> Self {
        TinyScalar::new(self.0 as u64 * rhs.0 as u64)
    }
}

impl Neg for TinyScalar {
    type Output = TinyScalar;
    fn neg(self) -> Self {
        TinyScalar::new(Q - self.0 as u64)
    }
}

/// Element of the order-11 subgroup of `Z_23^*` (the quadratic residues).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TinyElement(u8);

impl TinyElement {
    /// Returns `None` unless `v` lies in the order-11 subgroup.
    pub fn new(v: u64) -> Option<Self> {
        let v = v % P;
        (v != 0 && pow_mod(v, Q) == 1).then_some(TinyElement(v as u8))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= P;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        exp >>= 1;
    }
    acc
}

fn log_h(e: u8) -> u64 {
    (0..Q).find(|&k| pow_mod(H as u64, k) == e as u64).expect("element in subgroup")
}

/// Order-11 subgroup of the integers mod 23.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tiny23;

impl PrimeGroup for Tiny23 {
    type Scalar = TinyScalar;
    type Element = TinyElement;

    const BACKEND: Backend = Backend::TinyTest;
    const SCALAR_BYTES: usize = 1;
    const ELEMENT_BYTES: usize = 1;

    fn order_be_bytes() -> Vec<u8> {
        vec![Q as u8]
    }

    fn order_u64() -> Option<u64> {
        Some(Q)
    }

    fn scalar_from_u64(v: u64) -> TinyScalar {
        TinyScalar::new(v)
    }

    fn scalar_to_u64(s: &TinyScalar) -> Option<u64> {
        Some(s.0 as u64)
    }

    fn scalar_from_wide(bytes: &[u8; 64]) -> TinyScalar {
        let r = bytes.iter().fold(0u64, |acc, &b| (acc * 256 + b as u64) % Q);
        TinyScalar(r as u8)
    }

    fn encode_scalar(s: &TinyScalar, out: &mut Vec<u8>) {
        out.push(s.0);
    }

    fn decode_scalar(bytes: &[u8]) -> Option<TinyScalar> {
        match bytes {
            [b] if (*b as u64) < Q => Some(TinyScalar(*b)),
            _ => None,
        }
    }

    fn identity() -> TinyElement {
        TinyElement(1)
    }

    fn generator() -> TinyElement {
        TinyElement(H)
    }

    fn op(a: &TinyElement, b: &TinyElement) -> TinyElement {
        TinyElement((a.0 as u64 * b.0 as u64 % P) as u8)
    }

    fn inverse(a: &TinyElement) -> TinyElement {
        TinyElement(pow_mod(a.0 as u64, P - 2) as u8)
    }

    fn pow(base: &TinyElement, exp: &TinyScalar) -> TinyElement {
        TinyElement(pow_mod(base.0 as u64, exp.0 as u64) as u8)
    }

    fn encode_element(e: &TinyElement, out: &mut Vec<u8>) {
        out.push(e.0);
    }

    fn decode_element(bytes: &[u8]) -> Option<TinyElement> {
        match bytes {
            [b] if (*b as u64) < P => TinyElement::new(*b as u64),
            _ => None,
        }
    }

    fn setup_generators(n_choices: usize, _domain_tag: &[u8]) -> Result<Generators<Self>, GroupError> {
        if !(2..=CANDIDATES.len()).contains(&n_choices) {
            return Err(GroupError::UnsupportedChoices {
                backend: Backend::TinyTest,
                requested: n_choices,
                max: CANDIDATES.len(),
            });
        }
        let g_vec: Vec<TinyElement> = CANDIDATES[..n_choices].iter().map(|&v| TinyElement(v)).collect();
        let lambdas = g_vec.iter().map(|g| TinyScalar::new(log_h(g.0))).collect();
        Ok(Generators {
            h: TinyElement(H),
            g_vec,
            g: TinyElement(AUX),
            trapdoor: Some((lambdas, TinyScalar::new(log_h(AUX)))),
        })
    }
}
