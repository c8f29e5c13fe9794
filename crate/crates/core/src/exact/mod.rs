//! Exact arithmetic substrate: rationals, cyclotomic fields, number fields
//! with a designated involution, tensor products of the two, and truncated
//! q-series with fractional exponents.
//!
//! All values are immutable after construction and all operations are pure.

pub mod cyclo;
pub mod numfield;
pub mod qseries;
pub mod tower;

pub(crate) mod linalg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, the base field everywhere.
pub type Rat = BigRational;

/// Elements of a fixed field, with the field identity carried by an
/// exemplar: `zero_like`/`one_like` produce constants in the same field as
/// `self`. This lets series code stay generic without threading a field
/// handle separately.
pub trait FieldElem: Clone + PartialEq + std::fmt::Debug {
    /// Additive identity of the same field.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity of the same field.
    fn one_like(&self) -> Self;
    /// True if this is the additive identity.
    fn is_zero(&self) -> bool;
    /// Sum.
    fn add(&self, other: &Self) -> Self;
    /// Difference.
    fn sub(&self, other: &Self) -> Self;
    /// Product.
    fn mul(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` only for zero (or a zero divisor in a
    /// tensor product that is not a field).
    fn inv(&self) -> Option<Self>;
    /// Multiply by a rational scalar.
    fn scale(&self, r: &Rat) -> Self;
    /// The rational value, if this element is rational.
    fn to_rational(&self) -> Option<Rat>;
}

impl FieldElem for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn to_rational(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational p/q.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if Zero::is_zero(r) {
        return Some(Rat::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    let cand = Rat::new(n, d);
    if &cand * &cand == *r {
        Some(cand)
    } else {
        None
    }
}

/// Parse a rational from "p" or "p/q".
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        None => s.trim().parse::<BigInt>().ok().map(Rat::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if Zero::is_zero(&q) {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
    }
}

/// Render a rational as "p" or "p/q".
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
