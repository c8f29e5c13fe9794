//! Truncated power series in q^{1/M} with exact coefficients.
//!
//! Exponents are stored in j-units: the coefficient at key j multiplies
//! q^{j/M}. Absent keys are zero. Precision is a strict upper bound on
//! stored j; arithmetic truncates to the smaller precision. "Zero to
//! precision" is distinct from proven zero and is surfaced through
//! [`SeriesValuation`].

use super::FieldElem;
use crate::error::{Error, Result};
use num_integer::Integer;
use std::collections::BTreeMap;

/// Valuation of a truncated series, in j-units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesValuation {
    /// Least j with a nonzero coefficient.
    Finite(i64),
    /// No nonzero coefficient below the stated precision; not a proof of
    /// vanishing.
    ZeroToPrecision(i64),
}

/// A truncated q-series with coefficients in a fixed exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<T: FieldElem> {
    denom: u64,
    prec: i64,
    coeffs: BTreeMap<i64, T>,
    zero: T,
}

impl<T: FieldElem> QSeries<T> {
    /// Empty (zero) series; `zero` is the field exemplar.
    pub fn new(denom: u64, prec: i64, zero: T) -> Self {
        assert!(denom >= 1 && prec >= 0);
        debug_assert!(zero.is_zero());
        QSeries {
            denom,
            prec,
            coeffs: BTreeMap::new(),
            zero,
        }
    }

    /// Exponent denominator M.
    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Truncation bound (exclusive) in j-units.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Field exemplar (a zero of the coefficient field).
    pub fn zero_exemplar(&self) -> &T {
        &self.zero
    }

    /// Coefficient at j (zero when absent).
    pub fn coeff(&self, j: i64) -> T {
        self.coeffs.get(&j).cloned().unwrap_or_else(|| self.zero.clone())
    }

    /// Set the coefficient at j; j must be within [0, prec).
    pub fn set_coeff(&mut self, j: i64, value: T) {
        assert!(0 <= j && j < self.prec, "exponent out of range");
        if value.is_zero() {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, value);
        }
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coeffs.iter().map(|(&j, v)| (j, v))
    }

    /// Least j with a nonzero coefficient, or the zero-to-precision flag.
    pub fn valuation(&self) -> SeriesValuation {
        match self.coeffs.keys().next() {
            Some(&j) => SeriesValuation::Finite(j),
            None => SeriesValuation::ZeroToPrecision(self.prec),
        }
    }

    /// Re-express with a larger exponent denominator (a multiple of the
    /// current one); exponents and precision scale accordingly.
    pub fn lift_denom(&self, new_denom: u64) -> Self {
        assert!(new_denom % self.denom == 0);
        let k = (new_denom / self.denom) as i64;
        let mut out = QSeries::new(new_denom, self.prec * k, self.zero.clone());
        for (&j, v) in &self.coeffs {
            out.coeffs.insert(j * k, v.clone());
        }
        out
    }

    /// Truncate to a smaller precision.
    pub fn truncate(&self, prec: i64) -> Self {
        let mut out = self.clone();
        out.prec = out.prec.min(prec);
        out.coeffs.retain(|&j, _| j < prec);
        out
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.denom.lcm(&other.denom);
        (self.lift_denom(m), other.lift_denom(m))
    }

    /// Sum, truncated to the smaller precision.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let prec = a.prec.min(b.prec);
        let mut out = QSeries::new(a.denom, prec, a.zero.clone());
        for (&j, v) in a.coeffs.iter().chain(b.coeffs.iter()) {
            if j < prec {
                let sum = out.coeff(j).add(v);
                out.set_coeff(j, sum);
            }
        }
        out
    }

    /// Difference, truncated to the smaller precision.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_by(&other.zero.one_like().neg()))
    }

    /// Multiply every coefficient by a field element.
    pub fn scale_by(&self, c: &T) -> Self {
        let mut out = QSeries::new(self.denom, self.prec, self.zero.clone());
        for (&j, v) in &self.coeffs {
            out.set_coeff(j, v.mul(c));
        }
        out
    }

    /// Cauchy product, truncated to the smaller precision.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let prec = a.prec.min(b.prec);
        let mut out = QSeries::new(a.denom, prec, a.zero.clone());
        for (&i, x) in &a.coeffs {
            if i >= prec {
                break;
            }
            for (&j, y) in &b.coeffs {
                let k = i + j;
                if k >= prec {
                    break;
                }
                let sum = out.coeff(k).add(&x.mul(y));
                out.set_coeff(k, sum);
            }
        }
        out
    }

    /// Square root: a series g with g·g = self up to precision.
    ///
    /// The valuation must be even and the leading coefficient must have a
    /// square root: either rational, or supplied via `root_hint` (verified).
    pub fn sqrt(&self, root_hint: Option<T>) -> Result<Self> {
        let v = match self.valuation() {
            SeriesValuation::Finite(v) => v,
            SeriesValuation::ZeroToPrecision(_) => {
                return Err(Error::Series {
                    context: "square root of a zero-to-precision series is indeterminate".into(),
                })
            }
        };
        if v % 2 != 0 {
            return Err(Error::Series {
                context: format!("odd valuation {v}, no square root"),
            });
        }
        let lead = self.coeff(v);
        let s = match root_hint {
            Some(h) => {
                if h.mul(&h) != lead {
                    return Err(Error::InvalidInput {
                        context: "supplied root does not square to the leading coefficient".into(),
                    });
                }
                h
            }
            None => match lead.to_rational().and_then(|r| super::rat_sqrt(&r)) {
                Some(r) => lead.one_like().scale(&r),
                None => return Err(Error::SqrtNeedsExtension),
            },
        };
        let (c, h) = self.sqrt_monic_from(v)?;
        debug_assert_eq!(c, lead);
        Ok(h.scale_by(&s))
    }

    /// Square root split as (leading coefficient c, monic series h) with
    /// c·h·h = self up to precision. No root of c is required.
    pub fn sqrt_monic(&self) -> Result<(T, Self)> {
        let v = match self.valuation() {
            SeriesValuation::Finite(v) => v,
            SeriesValuation::ZeroToPrecision(_) => {
                return Err(Error::Series {
                    context: "square root of a zero-to-precision series is indeterminate".into(),
                })
            }
        };
        if v % 2 != 0 {
            return Err(Error::Series {
                context: format!("odd valuation {v}, no square root"),
            });
        }
        self.sqrt_monic_from(v)
    }

    /// Core recurrence. `v` is the (even) valuation; returns (c, h) with h
    /// leading coefficient 1 at q^{v/2} and c·h² = self.
    fn sqrt_monic_from(&self, v: i64) -> Result<(T, Self)> {
        let c = self.coeff(v);
        let c_inv = c.inv().ok_or_else(|| Error::Series {
            context: "leading coefficient is a zero divisor".into(),
        })?;
        // Normalize: u = self / (c q^v), u(0) = 1; solve h0² = u term by
        // term, then shift by v/2.
        let prec_u = self.prec - v;
        let mut u = QSeries::new(self.denom, prec_u, self.zero.clone());
        for (&j, val) in &self.coeffs {
            u.set_coeff(j - v, val.mul(&c_inv));
        }
        let half = super::ratio(1, 2);
        let mut h0 = QSeries::new(self.denom, prec_u, self.zero.clone());
        h0.set_coeff(0, self.zero.one_like());
        for m in 1..prec_u {
            // (h0²)_m = 2 h0_m + Σ_{0<i<m} h0_i h0_{m-i}  must equal u_m.
            let mut conv = self.zero.clone();
            for (&i, x) in h0.coeffs.range(1..m) {
                conv = conv.add(&x.mul(&h0.coeff(m - i)));
            }
            let hm = u.coeff(m).sub(&conv).scale(&half);
            h0.set_coeff(m, hm);
        }
        // Shift exponents by v/2.
        let shift = v / 2;
        let mut h = QSeries::new(self.denom, prec_u + shift, self.zero.clone());
        for (&j, val) in &h0.coeffs {
            h.set_coeff(j + shift, val.clone());
        }
        Ok((c, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, Rat};

    fn series(denom: u64, prec: i64, terms: &[(i64, i64)]) -> QSeries<Rat> {
        let mut s = QSeries::new(denom, prec, rat(0));
        for &(j, c) in terms {
            s.set_coeff(j, rat(c));
        }
        s
    }

    #[test]
    fn products() {
        let q = series(1, 5, &[(1, 1)]);
        assert_eq!(q.mul(&q), series(1, 5, &[(2, 1)]));
        let a = series(1, 3, &[(0, 1), (1, 1)]);
        let b = series(1, 3, &[(0, 1), (1, -1)]);
        assert_eq!(a.mul(&b), series(1, 3, &[(0, 1), (2, -1)]));
        let c = series(1, 6, &[(1, 1), (2, 1)]);
        assert_eq!(c.mul(&c), series(1, 6, &[(2, 1), (3, 2), (4, 1)]));
    }

    #[test]
    fn valuation_and_flags() {
        let s = series(1, 10, &[(3, 1), (5, 1)]);
        assert_eq!(s.valuation(), SeriesValuation::Finite(3));
        let z = series(1, 10, &[]);
        assert_eq!(z.valuation(), SeriesValuation::ZeroToPrecision(10));
    }

    #[test]
    fn perfect_square_sqrt() {
        let f = series(1, 8, &[(2, 1), (3, 2), (4, 1)]);
        let g = f.sqrt(None).unwrap();
        assert_eq!(g.coeff(1), rat(1));
        assert_eq!(g.coeff(2), rat(1));
        assert_eq!(g.mul(&g), f.truncate(g.prec()));
    }

    #[test]
    fn sqrt_with_rational_leading_coefficient() {
        // 4q² - 4q³ -> 2q(1 - q/2 - q²/8 - ...).
        let f = series(1, 8, &[(2, 4), (3, -4)]);
        let g = f.sqrt(None).unwrap();
        assert_eq!(g.coeff(1), rat(2));
        assert_eq!(g.coeff(2), rat(-1));
        assert_eq!(g.coeff(3), ratio(-1, 4));
        assert_eq!(g.mul(&g), f.truncate(g.prec()));
    }

    #[test]
    fn sqrt_odd_valuation_rejected() {
        let f = series(1, 8, &[(3, 1)]);
        assert!(f.sqrt(None).is_err());
    }

    #[test]
    fn monic_sqrt_splits_leading_coefficient() {
        // 2q² + 4q³: no rational root of 2, but c·h² works.
        let f = series(1, 8, &[(2, 2), (3, 4)]);
        assert!(f.sqrt(None).is_err());
        let (c, h) = f.sqrt_monic().unwrap();
        assert_eq!(c, rat(2));
        assert_eq!(h.coeff(1), rat(1));
        assert_eq!(h.mul(&h).scale_by(&c), f.truncate(h.prec()));
    }

    #[test]
    fn denominator_lift() {
        let a = series(1, 4, &[(1, 1)]); // q
        let b = series(5, 20, &[(1, 1)]); // q^{1/5}
        let p = a.mul(&b); // q^{6/5}
        assert_eq!(p.denom(), 5);
        assert_eq!(p.coeff(6), rat(1));
    }
}
