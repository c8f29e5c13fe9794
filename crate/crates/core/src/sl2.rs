//! SL₂(Z) matrices, words in the generators S and T, congruence-group
//! specifications (N₁, N₂), and finite reductions mod m.
//!
//! # Conventions
//!
//! - S = [[0,-1],[1,0]], T = [[1,1],[0,1]].
//! - A group spec (N₁, N₂) denotes Γ = Γ₁(N₁) ∩ Γ(N₂) and must satisfy
//!   the standing condition: gcd(N₁,N₂) odd and lcm(N₁,N₂) ≥ 5, which
//!   forces Γ torsion-free with −I ∉ Γ.
//! - Words are run-length compressed: a list of (generator, exponent).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An integer 2×2 matrix; group-element constructors enforce determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    /// Top-left entry.
    pub a: BigInt,
    /// Top-right entry.
    pub b: BigInt,
    /// Bottom-left entry.
    pub c: BigInt,
    /// Bottom-right entry.
    pub d: BigInt,
}

impl Mat2 {
    /// Build from integers, checking determinant 1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Mat2> {
        Self::from_bigints(a.into(), b.into(), c.into(), d.into())
    }

    /// Build from big integers, checking determinant 1.
    pub fn from_bigints(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Mat2> {
        let m = Mat2 { a, b, c, d };
        let det = m.det();
        if det.is_one() {
            Ok(m)
        } else {
            Err(Error::NotUnimodular {
                det: det.to_string(),
            })
        }
    }

    /// Identity.
    pub fn identity() -> Mat2 {
        Mat2::new(1, 0, 0, 1).unwrap()
    }

    /// S = [[0,-1],[1,0]].
    pub fn s() -> Mat2 {
        Mat2::new(0, -1, 1, 0).unwrap()
    }

    /// T = [[1,1],[0,1]].
    pub fn t() -> Mat2 {
        Mat2::new(1, 1, 0, 1).unwrap()
    }

    /// T^k.
    pub fn t_pow(k: i64) -> Mat2 {
        Mat2::new(1, k, 0, 1).unwrap()
    }

    /// Determinant.
    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Matrix product.
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Inverse (determinant 1: the adjugate).
    pub fn inv(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// Negation (the other representative of the same PSL₂ class).
    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// True for the identity matrix.
    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Trace.
    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// Entries reduced mod m.
    pub fn reduce(&self, m: u64) -> ModMat2 {
        let mm = BigInt::from(m);
        let r = |x: &BigInt| -> u64 {
            let v = x.mod_floor(&mm);
            u64::try_from(v).expect("mod_floor is nonnegative")
        };
        ModMat2 {
            m,
            e: [r(&self.a), r(&self.b), r(&self.c), r(&self.d)],
        }
    }

    /// Parse "a,b,c,d".
    pub fn parse(s: &str) -> Result<Mat2> {
        let parts: Vec<_> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidInput {
                context: format!("expected 4 comma-separated entries, got {}", parts.len()),
            });
        }
        let mut vals = Vec::new();
        for p in parts {
            vals.push(p.parse::<BigInt>().map_err(|_| Error::InvalidInput {
                context: format!("bad integer entry '{p}'"),
            })?);
        }
        Mat2::from_bigints(
            vals[0].clone(),
            vals[1].clone(),
            vals[2].clone(),
            vals[3].clone(),
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A 2×2 matrix over Z/m with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMat2 {
    /// Modulus.
    pub m: u64,
    /// Entries a, b, c, d in [0, m).
    pub e: [u64; 4],
}

impl ModMat2 {
    /// Identity mod m.
    pub fn identity(m: u64) -> ModMat2 {
        ModMat2 {
            m,
            e: [1 % m, 0, 0, 1 % m],
        }
    }

    /// Product mod m.
    pub fn mul(&self, o: &ModMat2) -> ModMat2 {
        debug_assert_eq!(self.m, o.m);
        let m = self.m;
        let [a, b, c, d] = self.e;
        let [x, y, z, w] = o.e;
        ModMat2 {
            m,
            e: [
                (a * x + b * z) % m,
                (a * y + b * w) % m,
                (c * x + d * z) % m,
                (c * y + d * w) % m,
            ],
        }
    }

    /// Inverse, using determinant 1: the adjugate mod m.
    pub fn inv(&self) -> ModMat2 {
        let m = self.m;
        let [a, b, c, d] = self.e;
        ModMat2 {
            m,
            e: [d, (m - b % m) % m, (m - c % m) % m, a],
        }
    }

    /// Negation mod m.
    pub fn neg(&self) -> ModMat2 {
        let m = self.m;
        ModMat2 {
            m,
            e: self.e.map(|x| (m - x % m) % m),
        }
    }

    /// True for the identity mod m.
    pub fn is_identity(&self) -> bool {
        self == &ModMat2::identity(self.m)
    }
}

/// One generator of PSL₂(Z) (or SL₂(Z) together with exponents).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gen {
    /// The order-4 rotation [[0,-1],[1,0]].
    S,
    /// The shear [[1,1],[0,1]].
    T,
}

/// A run-length-compressed word in S and T with integer exponents.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word {
    /// Letters with exponents; exponent never zero.
    pub letters: Vec<(Gen, i64)>,
}

impl Word {
    /// The empty word.
    pub fn empty() -> Word {
        Word::default()
    }

    /// Append one letter, merging runs.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, e));
    }

    /// Concatenate.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    /// Formal inverse.
    pub fn inverse(&self) -> Word {
        let mut w = Word::empty();
        for &(g, e) in self.letters.iter().rev() {
            w.push(g, -e);
        }
        w
    }

    /// Evaluate as an SL₂(Z) matrix.
    pub fn evaluate(&self) -> Mat2 {
        let mut acc = Mat2::identity();
        for &(g, e) in &self.letters {
            let base = match g {
                Gen::S => Mat2::s(),
                Gen::T => Mat2::t_pow(1),
            };
            let base = if e < 0 { base.inv() } else { base };
            match g {
                Gen::T => acc = acc.mul(&Mat2::t_pow(e)),
                Gen::S => {
                    for _ in 0..e.unsigned_abs() {
                        acc = acc.mul(&base);
                    }
                }
            }
        }
        acc
    }

    /// Flat letter sequence (exponents expanded to ±1 steps), for scanning
    /// coset tables. Yields (generator, is_inverse).
    pub fn flat_letters(&self) -> Vec<(Gen, bool)> {
        let mut out = Vec::new();
        for &(g, e) in &self.letters {
            for _ in 0..e.unsigned_abs() {
                out.push((g, e < 0));
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = match g {
                Gen::S => "S",
                Gen::T => "T",
            };
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Decompose an SL₂(Z) matrix as a word in S and T whose product is
/// exactly M (not just up to sign). Continued-fraction reduction by
/// T-shifts and S-flips, then a sign fix by S².
pub fn word_decompose(m: &Mat2) -> Result<Word> {
    if !m.det().is_one() {
        return Err(Error::NotUnimodular {
            det: m.det().to_string(),
        });
    }
    // Left-multiply by T^q and S to drive c to zero; with ops L1, ..., Lk
    // applied in order, M = L1^{-1} L2^{-1} ... Lk^{-1} · R, R = ±T^k, so
    // append each inverse as it happens.
    let mut cur = m.clone();
    let mut pre = Word::empty();
    while !cur.c.is_zero() {
        if cur.a.magnitude() < cur.c.magnitude() || cur.a.is_zero() {
            // Swap rows (with sign): S · cur.
            cur = Mat2::s().mul(&cur);
            pre.push(Gen::S, -1);
        } else {
            // Reduce: T^{-q} · cur with q = floor(a/c), leaving 0 <= a < |c|.
            let q = cur.a.div_floor(&cur.c);
            cur = Mat2::t_pow(big_to_i64(&(-&q))?).mul(&cur);
            pre.push(Gen::T, big_to_i64(&q)?);
        }
    }
    // cur = [[u, k],[0, u]] with u = ±1.
    let mut tail = Word::empty();
    if cur.a.is_one() {
        tail.push(Gen::T, big_to_i64(&cur.b)?);
    } else {
        // cur = -T^{-k}; S² = -I.
        tail.push(Gen::S, 2);
        tail.push(Gen::T, -big_to_i64(&cur.b)?);
    }
    let word = pre.concat(&tail);
    debug_assert_eq!(word.evaluate(), *m);
    Ok(word)
}

fn big_to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x.clone()).map_err(|_| Error::InvalidInput {
        context: format!("entry {x} exceeds machine range for word exponents"),
    })
}

/// A congruence level (N₁, N₂) for Γ = Γ₁(N₁) ∩ Γ(N₂).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    n1: u64,
    n2: u64,
}

impl GroupSpec {
    /// Validate the standing condition: gcd odd and lcm ≥ 5.
    pub fn new(n1: u64, n2: u64) -> Result<GroupSpec> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidSpec {
                n1,
                n2,
                reason: "levels must be positive".into(),
            });
        }
        if n1.gcd(&n2) % 2 == 0 {
            return Err(Error::InvalidSpec {
                n1,
                n2,
                reason: format!("gcd {} is even", n1.gcd(&n2)),
            });
        }
        if n1.lcm(&n2) < 5 {
            return Err(Error::InvalidSpec {
                n1,
                n2,
                reason: format!("lcm {} is below 5", n1.lcm(&n2)),
            });
        }
        Ok(GroupSpec { n1, n2 })
    }

    /// Γ₁(N) as a spec.
    pub fn gamma1(n: u64) -> Result<GroupSpec> {
        GroupSpec::new(n, 1)
    }

    /// First level (the Γ₁ part).
    pub fn n1(&self) -> u64 {
        self.n1
    }

    /// Second level (the principal part).
    pub fn n2(&self) -> u64 {
        self.n2
    }

    /// N = lcm(N₁, N₂).
    pub fn n(&self) -> u64 {
        self.n1.lcm(&self.n2)
    }

    /// The Wohlfahrt companion level 2N.
    pub fn two_n(&self) -> u64 {
        2 * self.n()
    }

    /// Membership test: M ≡ (1 * / 0 1) mod N₁ and M ≡ I mod N₂.
    pub fn member(&self, m: &Mat2) -> Result<bool> {
        if !m.det().is_one() {
            return Err(Error::NotUnimodular {
                det: m.det().to_string(),
            });
        }
        let r1 = m.reduce(self.n1);
        let r2 = m.reduce(self.n2);
        let one1 = 1 % self.n1;
        let ok1 = r1.e[0] == one1 && r1.e[2] == 0 && r1.e[3] == one1;
        Ok(ok1 && r2.is_identity())
    }

    /// Membership mod the finite reduction: the image of Γ in SL₂(Z/m)
    /// for any m divisible by both levels is exactly the matrices
    /// satisfying the two congruence conditions (lift via surjectivity of
    /// SL₂(Z) → SL₂(Z/m)).
    pub fn member_mod(&self, m: &ModMat2) -> bool {
        assert!(
            m.m % self.n1 == 0 && m.m % self.n2 == 0,
            "modulus must be divisible by both levels"
        );
        let n1 = self.n1;
        let n2 = self.n2;
        let ok1 = m.e[0] % n1 == 1 % n1 && m.e[2] % n1 == 0 && m.e[3] % n1 == 1 % n1;
        let ok2 = m.e[0] % n2 == 1 % n2
            && m.e[1] % n2 == 0
            && m.e[2] % n2 == 0
            && m.e[3] % n2 == 1 % n2;
        ok1 && ok2
    }
}

/// A finite matrix group: closure of generators inside SL₂(Z/m).
#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    /// Common modulus of all elements.
    pub modulus: u64,
    /// Generator images.
    pub gens: Vec<ModMat2>,
    /// All elements, sorted by entry tuple (deterministic order).
    pub elements: Vec<ModMat2>,
}

impl FiniteSubgroup {
    /// BFS closure of the generators under multiplication, capped.
    pub fn generate(modulus: u64, gens: &[ModMat2], cap: usize) -> Result<FiniteSubgroup> {
        use std::collections::HashSet;
        let mut seen: HashSet<ModMat2> = HashSet::new();
        let id = ModMat2::identity(modulus);
        seen.insert(id);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                debug_assert_eq!(g.m, modulus);
                let y = x.mul(g);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    frontier.push(y);
                }
            }
        }
        let mut elements: Vec<ModMat2> = seen.into_iter().collect();
        elements.sort();
        Ok(FiniteSubgroup {
            modulus,
            gens: gens.to_vec(),
            elements,
        })
    }

    /// All matrices mod m with det 1 satisfying the (N₁, N₂) congruence
    /// conditions, by direct enumeration. m must be divisible by both
    /// levels and small (brute force over m⁴ tuples).
    pub fn from_conditions(m: u64, n1: u64, n2: u64) -> Result<FiniteSubgroup> {
        if m > 48 {
            return Err(Error::InvalidInput {
                context: format!("modulus {m} too large for direct enumeration"),
            });
        }
        if m % n1 != 0 || m % n2 != 0 {
            return Err(Error::InvalidInput {
                context: "modulus must be divisible by both levels".into(),
            });
        }
        let mut elements = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        if ((a * d) % m + m - (b * c) % m) % m != 1 % m {
                            continue;
                        }
                        let cand = ModMat2 { m, e: [a, b, c, d] };
                        let ok1 = a % n1 == 1 % n1 && c % n1 == 0 && d % n1 == 1 % n1;
                        let ok2 = a % n2 == 1 % n2
                            && b % n2 == 0
                            && c % n2 == 0
                            && d % n2 == 1 % n2;
                        if ok1 && ok2 {
                            elements.push(cand);
                        }
                    }
                }
            }
        }
        elements.sort();
        Ok(FiniteSubgroup {
            modulus: m,
            gens: elements.clone(),
            elements,
        })
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Membership.
    pub fn contains(&self, x: &ModMat2) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// |SL₂(Z/m)| by multiplicativity over prime powers.
pub fn sl2_order(m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut order = 1u64;
    for (p, e) in crate::arith::factorize(m) {
        let pe = p.pow(e);
        // p^{3e} (1 - 1/p^2)
        order *= pe * pe * pe / (p * p) * (p * p - 1);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        let s = GroupSpec::new(5, 1).unwrap();
        assert_eq!(s.n(), 5);
        assert!(matches!(
            GroupSpec::new(1, 4),
            Err(Error::InvalidSpec { .. })
        ));
        assert!(matches!(
            GroupSpec::new(6, 2),
            Err(Error::InvalidSpec { .. })
        ));
        // gcd(1,10)=1 odd, lcm 10 >= 5: valid mixed spec.
        assert!(GroupSpec::new(1, 10).is_ok());
    }

    #[test]
    fn membership() {
        let g5 = GroupSpec::gamma1(5).unwrap();
        assert!(g5.member(&Mat2::t()).unwrap());
        assert!(g5.member(&Mat2::new(1, 0, 5, 1).unwrap()).unwrap());
        assert!(!g5.member(&Mat2::new(2, 1, 5, 3).unwrap()).unwrap());
        assert!(!g5.member(&Mat2::identity().neg()).unwrap());
    }

    #[test]
    fn word_decomposition() {
        assert_eq!(word_decompose(&Mat2::identity()).unwrap(), Word::empty());
        let t = word_decompose(&Mat2::t()).unwrap();
        assert_eq!(t.evaluate(), Mat2::t());
        assert_eq!(t.letters, vec![(Gen::T, 1)]);
        // Lower shear: S T^{-1} S^{-1} = [[1,0],[1,1]].
        let lower = Mat2::new(1, 0, 1, 1).unwrap();
        let w = word_decompose(&lower).unwrap();
        assert_eq!(w.evaluate(), lower);
        // Exact sign: -I must decompose to something evaluating to -I.
        let neg = Mat2::identity().neg();
        assert_eq!(word_decompose(&neg).unwrap().evaluate(), neg);
    }

    #[test]
    fn word_round_trip_on_random_products() {
        // Deterministic pseudo-random S,T words.
        let mut state = 0x9E3779B97F4A7C15u64;
        for _ in 0..50 {
            let mut m = Mat2::identity();
            for _ in 0..12 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                match state >> 60 & 3 {
                    0 => m = m.mul(&Mat2::s()),
                    1 => m = m.mul(&Mat2::s().inv()),
                    2 => m = m.mul(&Mat2::t_pow((state >> 32 & 7) as i64 - 3)),
                    _ => m = m.mul(&Mat2::t()),
                }
            }
            let w = word_decompose(&m).unwrap();
            assert_eq!(w.evaluate(), m);
        }
    }

    #[test]
    fn finite_closure_orders() {
        // SL2(F2) from S and T: order 6.
        let g = FiniteSubgroup::generate(
            2,
            &[Mat2::s().reduce(2), Mat2::t().reduce(2)],
            100,
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(sl2_order(2), 6);
        assert_eq!(sl2_order(22), 7920);
    }

    #[test]
    fn conditions_enumeration() {
        // Upper unipotent group mod 5 (Gamma_1(5) image mod 5): order 5.
        let g = FiniteSubgroup::from_conditions(5, 5, 1).unwrap();
        assert_eq!(g.order(), 5);
        // Principal congruence kernel mod 4 over level 2: order 8.
        let k = FiniteSubgroup::from_conditions(4, 1, 2).unwrap();
        assert_eq!(k.order(), 8);
    }
}
