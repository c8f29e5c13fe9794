//! Cyclotomic field elements in the power basis 1, ζ_m, …, ζ_m^{φ(m)−1}.
//!
//! Coefficients are always kept reduced modulo the m-th cyclotomic
//! polynomial. Binary operations lift both sides to the lcm of the
//! conductors first; [`CycloElem::normalize`] additionally descends to the
//! minimal conductor (never ≡ 2 mod 4) and is idempotent.

use super::linalg::solve;
use super::{FieldElem, Rat};
use crate::arith::{divisors, euler_phi};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Monic cyclotomic polynomial Φ_m, ascending coefficients, length φ(m)+1.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Rat>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for all proper divisors d of m.
    let mut num = vec![Rat::zero(); m as usize + 1];
    num[0] = -Rat::one();
    num[m as usize] = Rat::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        num = poly_div_exact(&num, &phi_d);
    }
    let result = Arc::new(num);
    assert_eq!(result.len() as u64, euler_phi(m) + 1);
    cache.lock().unwrap().insert(m, result.clone());
    result
}

/// Exact polynomial division (remainder must be zero), ascending coeffs.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![Rat::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if Zero::is_zero(&c) {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=dd {
            let v = &rem[k + j] - &c * &den[j];
            rem[k + j] = v;
        }
    }
    assert!(rem.iter().all(|c| Zero::is_zero(c)), "division must be exact");
    quot
}

/// Reduce an arbitrary-length coefficient vector modulo Φ_m.
fn reduce_mod_phi(coeffs: &[Rat], m: u64) -> Vec<Rat> {
    let phi = euler_phi(m) as usize;
    let modpoly = cyclotomic_poly(m);
    let mut rem = coeffs.to_vec();
    if rem.len() < phi {
        rem.resize(phi, Rat::zero());
    }
    for k in (phi..rem.len()).rev() {
        let c = rem[k].clone();
        if Zero::is_zero(&c) {
            continue;
        }
        rem[k] = Rat::zero();
        // x^k = x^{k-phi} * (x^phi) with x^phi = -(lower part of Φ_m).
        for j in 0..phi {
            let v = &rem[k - phi + j] - &c * &modpoly[j];
            rem[k - phi + j] = v;
        }
    }
    rem.truncate(phi);
    rem
}

/// An element of Q(ζ_m) in the power basis.
#[derive(Clone, Debug)]
pub struct CycloElem {
    cond: u64,
    coeffs: Vec<Rat>,
}

impl CycloElem {
    /// Zero in the conductor-m field.
    pub fn zero(m: u64) -> Self {
        CycloElem {
            cond: m,
            coeffs: vec![Rat::zero(); euler_phi(m) as usize],
        }
    }

    /// A rational constant (conductor 1).
    pub fn from_rat(r: Rat) -> Self {
        CycloElem {
            cond: 1,
            coeffs: vec![r],
        }
    }

    /// ζ_m^k, reduced.
    pub fn zeta(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut raw = vec![Rat::zero(); k + 1];
        raw[k] = Rat::one();
        CycloElem {
            cond: m,
            coeffs: reduce_mod_phi(&raw, m),
        }
    }

    /// Build from arbitrary power-basis coefficients (any length), reducing.
    pub fn from_coeffs(m: u64, coeffs: Vec<Rat>) -> Self {
        CycloElem {
            cond: m,
            coeffs: reduce_mod_phi(&coeffs, m),
        }
    }

    /// Stored conductor.
    pub fn conductor(&self) -> u64 {
        self.cond
    }

    /// Power-basis coordinates (length φ(conductor)).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Re-express in the conductor-m′ field, m′ a multiple of the conductor.
    pub fn lift_to(&self, m2: u64) -> Self {
        assert!(m2 % self.cond == 0, "lift target must be a multiple");
        if m2 == self.cond {
            return self.clone();
        }
        let step = (m2 / self.cond) as usize;
        let mut raw = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        CycloElem {
            cond: m2,
            coeffs: reduce_mod_phi(&raw, m2),
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.cond.lcm(&other.cond);
        (self.lift_to(m), other.lift_to(m))
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> Self {
        let m = self.cond;
        let mut acc = CycloElem::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let mut term = CycloElem::zeta(m, -(i as i64));
            for t in term.coeffs.iter_mut() {
                *t *= c;
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// The rational value if the element lies in Q.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| Zero::is_zero(c)) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Canonical form: minimal conductor (never ≡ 2 mod 4) containing the
    /// element, coefficients reduced. Idempotent.
    pub fn normalize(&self) -> Self {
        for d in divisors(self.cond) {
            if d % 4 == 2 {
                // Q(zeta_{2u}) = Q(zeta_u) for odd u; covered at d/2.
                continue;
            }
            if d == self.cond {
                break;
            }
            if let Some(descended) = self.descend_to(d) {
                return descended;
            }
        }
        self.clone()
    }

    /// Try to express the element in Q(ζ_d) for a divisor d of the conductor.
    fn descend_to(&self, d: u64) -> Option<Self> {
        let m = self.cond;
        let phi_m = self.coeffs.len();
        let phi_d = euler_phi(d) as usize;
        let step = (m / d) as i64;
        // Columns: coords of ζ_m^{step·i} for i < φ(d).
        let mut rows = vec![vec![Rat::zero(); phi_d]; phi_m];
        for i in 0..phi_d {
            let col = CycloElem::zeta(m, step * i as i64);
            for (r, c) in col.coeffs.iter().enumerate() {
                rows[r][i] = c.clone();
            }
        }
        let y = solve(&rows, &self.coeffs)?;
        Some(CycloElem {
            cond: d,
            coeffs: reduce_mod_phi(&y, d),
        })
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl FieldElem for CycloElem {
    fn zero_like(&self) -> Self {
        CycloElem::zero(self.cond)
    }
    fn one_like(&self) -> Self {
        let mut v = CycloElem::zero(self.cond);
        v.coeffs[0] = Rat::one();
        v
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| Zero::is_zero(c))
    }
    fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let mut raw = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if Zero::is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if Zero::is_zero(y) {
                    continue;
                }
                let v = &raw[i + j] + x * y;
                raw[i + j] = v;
            }
        }
        CycloElem {
            cond: a.cond,
            coeffs: reduce_mod_phi(&raw, a.cond),
        }
    }
    fn neg(&self) -> Self {
        CycloElem {
            cond: self.cond,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if FieldElem::is_zero(self) {
            return None;
        }
        // Solve x · self = 1 in the power basis.
        let phi = self.coeffs.len();
        let mut rows = vec![vec![Rat::zero(); phi]; phi];
        for i in 0..phi {
            let mut basis = CycloElem::zero(self.cond);
            basis.coeffs[i] = Rat::one();
            let prod = self.mul(&basis);
            for (r, c) in prod.coeffs.iter().enumerate() {
                rows[r][i] = c.clone();
            }
        }
        let mut rhs = vec![Rat::zero(); phi];
        rhs[0] = Rat::one();
        let x = solve(&rows, &rhs)?;
        Some(CycloElem {
            cond: self.cond,
            coeffs: x,
        })
    }
    fn scale(&self, r: &Rat) -> Self {
        CycloElem {
            cond: self.cond,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }
    fn to_rational(&self) -> Option<Rat> {
        self.to_rat()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycloElem::zeta(4, 1);
        assert_eq!(i.mul(&i), CycloElem::from_rat(rat(-1)));
    }

    #[test]
    fn sum_of_nontrivial_fifth_roots() {
        let mut acc = CycloElem::zero(5);
        for k in 1..5 {
            acc = acc.add(&CycloElem::zeta(5, k));
        }
        assert_eq!(acc, CycloElem::from_rat(rat(-1)));
    }

    #[test]
    fn zeta6_descends_to_conductor_3() {
        // zeta_6 = 1 + zeta_3.
        let z6 = CycloElem::zeta(6, 1);
        let n = z6.normalize();
        assert_eq!(n.conductor(), 3);
        let expected = CycloElem::zeta(3, 1).add(&CycloElem::from_rat(rat(1)));
        assert_eq!(n, expected);
        // Idempotent.
        assert_eq!(n.normalize().conductor(), 3);
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn lift_then_multiply_matches_multiply_after_lift() {
        let a = CycloElem::zeta(3, 1);
        let b = CycloElem::zeta(4, 1);
        let prod = a.mul(&b);
        let prod2 = a.lift_to(12).mul(&b.lift_to(12));
        assert_eq!(prod, prod2);
        assert_eq!(prod, CycloElem::zeta(12, 7));
    }

    #[test]
    fn inverse_and_conj() {
        let z = CycloElem::zeta(5, 2);
        let zi = z.inv().unwrap();
        assert_eq!(z.mul(&zi), z.one_like());
        assert_eq!(z.conj(), zi); // |zeta| = 1, conj = inverse
    }
}
