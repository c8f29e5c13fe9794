//! Dirichlet characters of squarefree odd modulus as products of
//! prime-modulus local characters, their Gauss sums, and exact square
//! roots of odd primes via quadratic Gauss sums.

use crate::arith::{discrete_log, factorize, is_squarefree, primitive_root};
use crate::error::{Error, Result};
use crate::exact::cyclo::CycloElem;
use crate::exact::{rat, FieldElem};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A Dirichlet character mod an odd prime p, determined by its value
/// ζ_{p−1}^exponent on a chosen primitive root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalChar {
    /// The prime modulus.
    pub prime: u64,
    /// A primitive root mod the prime.
    pub generator: u64,
    /// Exponent e with χ(generator) = ζ_{p−1}^e, reduced mod p−1.
    pub zeta_exponent: u64,
}

impl LocalChar {
    /// Validate the data: prime modulus, honest primitive root.
    pub fn new(prime: u64, generator: u64, zeta_exponent: u64) -> Result<LocalChar> {
        let f = factorize(prime);
        if f.len() != 1 || f[0].1 != 1 || prime == 2 {
            return Err(Error::InvalidInput {
                context: format!("local character modulus {prime} must be an odd prime"),
            });
        }
        if primitive_root_check(prime, generator).is_none() {
            return Err(Error::InvalidInput {
                context: format!("{generator} is not a primitive root mod {prime}"),
            });
        }
        Ok(LocalChar {
            prime,
            generator,
            zeta_exponent: zeta_exponent % (prime - 1),
        })
    }

    /// The trivial character mod p.
    pub fn trivial(prime: u64) -> Result<LocalChar> {
        check_odd_prime(prime)?;
        LocalChar::new(prime, primitive_root(prime), 0)
    }

    /// The quadratic (Legendre) character mod p.
    pub fn legendre(prime: u64) -> Result<LocalChar> {
        check_odd_prime(prime)?;
        LocalChar::new(prime, primitive_root(prime), (prime - 1) / 2)
    }

    /// True for the trivial character.
    pub fn is_trivial(&self) -> bool {
        self.zeta_exponent == 0
    }

    /// Primitive iff nontrivial (prime modulus has no smaller conductor).
    pub fn is_primitive(&self) -> bool {
        !self.is_trivial()
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        (self.prime - 1) / self.zeta_exponent.gcd(&(self.prime - 1))
    }

    /// χ(x): a root of unity for x coprime to p, zero otherwise.
    pub fn value(&self, x: i64) -> CycloElem {
        let p = self.prime as i64;
        let r = x.rem_euclid(p) as u64;
        if r == 0 {
            return CycloElem::zero(1);
        }
        if self.zeta_exponent == 0 {
            return CycloElem::from_rat(rat(1));
        }
        let k = discrete_log(self.generator, r, self.prime)
            .expect("nonzero residues lie in the cyclic unit group");
        CycloElem::zeta(self.prime - 1, (self.zeta_exponent * k) as i64).normalize()
    }

    /// The conjugate character χ̄.
    pub fn conj(&self) -> LocalChar {
        LocalChar {
            prime: self.prime,
            generator: self.generator,
            zeta_exponent: (self.prime - 1 - self.zeta_exponent) % (self.prime - 1),
        }
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    let f = factorize(p);
    if p < 3 || f.len() != 1 || f[0].1 != 1 {
        return Err(Error::InvalidInput {
            context: format!("{p} is not an odd prime"),
        });
    }
    Ok(())
}

fn primitive_root_check(p: u64, g: u64) -> Option<()> {
    if g % p == 0 {
        return None;
    }
    for (q, _) in factorize(p - 1) {
        if crate::arith::pow_mod(g, (p - 1) / q, p) == 1 {
            return None;
        }
    }
    Some(())
}

/// A Dirichlet character of squarefree odd modulus, as the product of its
/// local factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletChar {
    modulus: u64,
    locals: Vec<LocalChar>,
}

impl DirichletChar {
    /// Assemble from local factors; their primes must multiply to the
    /// squarefree odd modulus.
    pub fn new(modulus: u64, locals: Vec<LocalChar>) -> Result<DirichletChar> {
        if modulus % 2 == 0 || !is_squarefree(modulus) {
            return Err(Error::InvalidInput {
                context: format!("character modulus {modulus} must be squarefree and odd"),
            });
        }
        let prod: u64 = locals.iter().map(|l| l.prime).product();
        let mut primes: Vec<u64> = locals.iter().map(|l| l.prime).collect();
        primes.sort_unstable();
        primes.dedup();
        if prod != modulus || primes.len() != locals.len() {
            return Err(Error::InvalidInput {
                context: "local factors must cover each prime of the modulus once".into(),
            });
        }
        Ok(DirichletChar { modulus, locals })
    }

    /// The trivial character mod a squarefree odd modulus.
    pub fn trivial(modulus: u64) -> Result<DirichletChar> {
        let locals = factorize(modulus)
            .into_iter()
            .map(|(p, _)| LocalChar::trivial(p))
            .collect::<Result<_>>()?;
        DirichletChar::new(modulus, locals)
    }

    /// Modulus.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The CRT factorization into prime-modulus characters.
    pub fn factor(&self) -> &[LocalChar] {
        &self.locals
    }

    /// The local factor at a prime dividing the modulus.
    pub fn local_at(&self, p: u64) -> Result<&LocalChar> {
        self.locals
            .iter()
            .find(|l| l.prime == p)
            .ok_or_else(|| Error::InvalidInput {
                context: format!("no local factor at {p}"),
            })
    }

    /// χ(x) = ∏ χ_p(x): zero when x shares a factor with the modulus.
    pub fn value(&self, x: i64) -> CycloElem {
        let mut acc = CycloElem::from_rat(rat(1));
        for l in &self.locals {
            let v = l.value(x);
            if FieldElem::is_zero(&v) {
                return CycloElem::zero(1);
            }
            acc = acc.mul(&v);
        }
        acc.normalize()
    }

    /// The conjugate character.
    pub fn conj(&self) -> DirichletChar {
        DirichletChar {
            modulus: self.modulus,
            locals: self.locals.iter().map(LocalChar::conj).collect(),
        }
    }

    /// True for the trivial character.
    pub fn is_trivial(&self) -> bool {
        self.locals.iter().all(LocalChar::is_trivial)
    }

    /// χ(−1) = 1, the parity condition for even weight.
    pub fn is_even(&self) -> bool {
        self.value(-1) == CycloElem::from_rat(rat(1))
    }
}

/// Gauss sum of a local character: Σ_{1≤h<p} χ(h) ζ_p^h when primitive,
/// −1 when trivial (the full exponential sum Σ ζ_p^h; the adopted value
/// for the trivial branch is recorded at the call sites that use it).
pub fn gauss_sum(chi: &LocalChar) -> CycloElem {
    if chi.is_trivial() {
        return CycloElem::from_rat(rat(-1));
    }
    let p = chi.prime;
    let mut acc = CycloElem::zero(1);
    for h in 1..p {
        let term = chi.value(h as i64).mul(&CycloElem::zeta(p, h as i64));
        acc = acc.add(&term);
    }
    acc.normalize()
}

/// Exact √p for an odd prime, positive in the embedding ζ_m = e^{2πi/m}:
/// the quadratic Gauss sum, corrected by ζ₄⁻¹ when p ≡ 3 mod 4.
pub fn sqrt_prime(p: u64) -> Result<CycloElem> {
    let leg = LocalChar::legendre(p)?;
    let g = gauss_sum(&leg);
    let out = if p % 4 == 1 {
        g
    } else {
        // The quadratic Gauss sum is i√p here.
        g.mul(&CycloElem::zeta(4, -1))
    };
    // The defining identity is exact.
    let sq = out.mul(&out);
    if sq != CycloElem::from_rat(rat(p as i64)) {
        return Err(Error::Inconsistency {
            context: format!("quadratic Gauss sum square is not {p}"),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_mod_5_gauss_sum() {
        let chi = LocalChar::legendre(5).unwrap();
        let g = gauss_sum(&chi);
        // zeta5 - zeta5^2 - zeta5^3 + zeta5^4.
        let z = |k| CycloElem::zeta(5, k);
        let expected = z(1).sub(&z(2)).sub(&z(3)).add(&z(4));
        assert_eq!(g, expected);
        assert_eq!(g.mul(&g), CycloElem::from_rat(rat(5)));
    }

    #[test]
    fn trivial_gauss_sum_is_minus_one() {
        let chi = LocalChar::trivial(7).unwrap();
        assert_eq!(gauss_sum(&chi), CycloElem::from_rat(rat(-1)));
    }

    #[test]
    fn gauss_norm_identity() {
        // g(χ)·g(χ̄) = χ(−1)·p for primitive χ.
        for p in [3u64, 5, 7, 11, 13] {
            let root = primitive_root(p);
            for e in 1..(p - 1) {
                let chi = LocalChar::new(p, root, e).unwrap();
                let prod = gauss_sum(&chi).mul(&gauss_sum(&chi.conj()));
                let rhs = chi.value(-1).scale(&crate::exact::ratio(p as i64, 1));
                assert_eq!(prod, rhs, "failed at p={p}, e={e}");
            }
        }
    }

    #[test]
    fn crt_factorization_reconstructs_values() {
        // Quadratic character mod 15 = Legendre mod 3 times Legendre mod 5.
        let chi = DirichletChar::new(
            15,
            vec![LocalChar::legendre(3).unwrap(), LocalChar::legendre(5).unwrap()],
        )
        .unwrap();
        for x in 1..15i64 {
            let whole = chi.value(x);
            let local = chi.locals[0].value(x).mul(&chi.locals[1].value(x));
            assert_eq!(whole, local.normalize());
        }
        // Nontrivial value check: 2 is a nonresidue mod 3 and mod 5.
        assert_eq!(chi.value(2), CycloElem::from_rat(rat(1)));
        assert_eq!(chi.value(7), CycloElem::from_rat(rat(-1)));
    }

    #[test]
    fn trivial_char_mod_35_factors() {
        let chi = DirichletChar::trivial(35).unwrap();
        assert_eq!(chi.factor().len(), 2);
        assert!(chi.factor().iter().all(LocalChar::is_trivial));
        assert!(chi.is_even());
        assert_eq!(chi.value(35), CycloElem::zero(1));
        assert_eq!(chi.value(5), CycloElem::zero(1));
        assert_eq!(chi.value(4), CycloElem::from_rat(rat(1)));
    }

    #[test]
    fn non_squarefree_modulus_rejected() {
        assert!(DirichletChar::trivial(9).is_err());
        assert!(DirichletChar::trivial(6).is_err());
        assert!(LocalChar::trivial(9).is_err());
    }

    #[test]
    fn sqrt_prime_both_residue_classes() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            let s = sqrt_prime(p).unwrap();
            assert_eq!(s.mul(&s), CycloElem::from_rat(rat(p as i64)));
        }
    }
}
