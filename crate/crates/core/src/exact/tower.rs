//! Elements of K ⊗_Q Q(ζ_m) for a number field K: polynomials in the K
//! generator with cyclotomic coefficients.
//!
//! This is the coefficient ring for cusp expansions, where eigenform
//! coefficients (living in K) are multiplied by character values and Gauss
//! sums (living in cyclotomic fields). The tensor product need not be a
//! field; `inv` reports `None` on zero divisors.

use super::cyclo::CycloElem;
use super::linalg::solve;
use super::numfield::NumField;
use super::{FieldElem, Rat};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::Arc;

/// An element of K ⊗ Q(ζ), coordinates over the K power basis with
/// cyclotomic entries.
#[derive(Clone, Debug)]
pub struct TowerElem {
    field: Arc<NumField>,
    coeffs: Vec<CycloElem>,
}

impl TowerElem {
    /// Zero of the given tower (conductor 1 until mixed).
    pub fn zero(field: Arc<NumField>) -> Self {
        let deg = field.degree();
        TowerElem {
            field,
            coeffs: vec![CycloElem::zero(1); deg],
        }
    }

    /// Embed a rational.
    pub fn from_rat(field: Arc<NumField>, r: Rat) -> Self {
        let mut v = TowerElem::zero(field);
        v.coeffs[0] = CycloElem::from_rat(r);
        v
    }

    /// Embed a cyclotomic element.
    pub fn from_cyclo(field: Arc<NumField>, c: CycloElem) -> Self {
        let mut v = TowerElem::zero(field);
        v.coeffs[0] = c;
        v
    }

    /// Embed a number-field element (the field must match).
    pub fn from_nf_coords(field: Arc<NumField>, coords: &[Rat]) -> Self {
        let deg = field.degree();
        assert_eq!(coords.len(), deg);
        TowerElem {
            field,
            coeffs: coords
                .iter()
                .map(|r| CycloElem::from_rat(r.clone()))
                .collect(),
        }
    }

    /// The K generator.
    pub fn generator(field: Arc<NumField>) -> Self {
        let deg = field.degree();
        if deg == 1 {
            let r = -field.poly()[0].clone();
            return TowerElem::from_rat(field, r);
        }
        let mut v = TowerElem::zero(field);
        v.coeffs[1] = CycloElem::from_rat(Rat::one());
        v
    }

    /// Field handle.
    pub fn field(&self) -> &Arc<NumField> {
        &self.field
    }

    /// Coordinates over the K power basis.
    pub fn coeffs(&self) -> &[CycloElem] {
        &self.coeffs
    }

    /// Largest cyclotomic conductor among the coordinates.
    pub fn conductor(&self) -> u64 {
        self.coeffs
            .iter()
            .fold(1u64, |m, c| m.lcm(&c.conductor()))
    }

    /// Designated conjugation: the K involution tensored with complex
    /// conjugation on the cyclotomic part.
    pub fn conj(&self) -> Self {
        // First conjugate coefficients, then substitute the conjugated
        // generator for the K generator.
        let conj_gen = TowerElem::from_nf_coords(self.field.clone(), self.field.conj_gen());
        let mut acc = TowerElem::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&conj_gen);
            acc.coeffs[0] = acc.coeffs[0].add(&c.conj());
        }
        acc
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "tower field mismatch"
        );
    }

    /// Flatten to rationals over the basis g^i ζ^j with the given conductor.
    fn flatten(&self, cond: u64) -> Vec<Rat> {
        let phi = crate::arith::euler_phi(cond) as usize;
        let mut out = Vec::with_capacity(self.coeffs.len() * phi);
        for c in &self.coeffs {
            let lifted = c.lift_to(cond);
            out.extend(lifted.coeffs().iter().cloned());
        }
        out
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a == b)
    }
}

impl FieldElem for TowerElem {
    fn zero_like(&self) -> Self {
        TowerElem::zero(self.field.clone())
    }
    fn one_like(&self) -> Self {
        TowerElem::from_rat(self.field.clone(), Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| FieldElem::is_zero(c))
    }
    fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        TowerElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let deg = self.field.degree();
        let mut raw = vec![CycloElem::zero(1); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if FieldElem::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if FieldElem::is_zero(b) {
                    continue;
                }
                raw[i + j] = raw[i + j].add(&a.mul(b));
            }
        }
        // Reduce degree via the monic defining polynomial.
        let poly = self.field.poly();
        for k in (deg..raw.len()).rev() {
            let c = raw[k].clone();
            if FieldElem::is_zero(&c) {
                continue;
            }
            raw[k] = CycloElem::zero(1);
            for j in 0..deg {
                let term = c.scale(&poly[j]);
                raw[k - deg + j] = raw[k - deg + j].sub(&term);
            }
        }
        raw.truncate(deg);
        TowerElem {
            field: self.field.clone(),
            coeffs: raw,
        }
    }
    fn neg(&self) -> Self {
        TowerElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if FieldElem::is_zero(self) {
            return None;
        }
        let cond = self.conductor();
        let phi = crate::arith::euler_phi(cond) as usize;
        let deg = self.field.degree();
        let dim = deg * phi;
        let mut rows = vec![vec![Rat::zero(); dim]; dim];
        for i in 0..deg {
            for j in 0..phi {
                // Basis element g^i ζ^j.
                let mut basis = TowerElem::zero(self.field.clone());
                basis.coeffs[i] = CycloElem::zeta(cond, j as i64);
                let prod = self.mul(&basis);
                for (r, v) in prod.flatten(cond).into_iter().enumerate() {
                    rows[r][i * phi + j] = v;
                }
            }
        }
        let mut rhs = vec![Rat::zero(); dim];
        rhs[0] = Rat::one();
        let x = solve(&rows, &rhs)?;
        let mut coeffs = Vec::with_capacity(deg);
        for i in 0..deg {
            coeffs.push(CycloElem::from_coeffs(
                cond,
                x[i * phi..(i + 1) * phi].to_vec(),
            ));
        }
        Some(TowerElem {
            field: self.field.clone(),
            coeffs,
        })
    }
    fn scale(&self, r: &Rat) -> Self {
        TowerElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }
    fn to_rational(&self) -> Option<Rat> {
        let head = self.coeffs[0].to_rat()?;
        if self.coeffs[1..].iter().all(|c| FieldElem::is_zero(c)) {
            Some(head)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn field() -> Arc<NumField> {
        NumField::new(vec![rat(-4), rat(1), rat(1)], vec![rat(-1), rat(-1)]).unwrap()
    }

    #[test]
    fn mixed_product() {
        // (b * zeta_4)^2 = b^2 * (-1) = -(4 - b) = b - 4.
        let f = field();
        let b = TowerElem::generator(f.clone());
        let i = TowerElem::from_cyclo(f.clone(), CycloElem::zeta(4, 1));
        let x = b.mul(&i);
        let sq = x.mul(&x);
        let expected = b.sub(&TowerElem::from_rat(f, rat(4)));
        assert_eq!(sq, expected);
    }

    #[test]
    fn conjugation_is_involutive_and_multiplicative() {
        let f = field();
        let b = TowerElem::generator(f.clone());
        let z = TowerElem::from_cyclo(f.clone(), CycloElem::zeta(5, 1));
        let x = b.mul(&z).add(&TowerElem::from_rat(f, rat(3)));
        assert_eq!(x.conj().conj(), x);
        let y = b.add(&z);
        assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
    }

    #[test]
    fn tower_inverse() {
        let f = field();
        let b = TowerElem::generator(f.clone());
        let z = TowerElem::from_cyclo(f.clone(), CycloElem::zeta(3, 1));
        let x = b.add(&z);
        let xi = x.inv().unwrap();
        assert_eq!(x.mul(&xi), x.one_like());
    }
}
