//! Congruence tests for signed lifts: the general level from cusp widths,
//! the mod-2 abelianization V₂ of finite quotients, the shear-span
//! criterion, the direct Schreier-generator test against Γ(2N), and the
//! Hecke-vanishing verdict for noncongruence lifts.
//!
//! Both congruence methods rest on the bound that a congruence subgroup of
//! general level dividing 2N contains Γ(2N); that bound is consumed, not
//! re-derived.

use crate::cosets::{Conditions, CosetTable, CuspClass};
use crate::error::{Error, Result};
use crate::f2::{kernel_basis, rank, BitVec};
use crate::presentation::{FreePresentation, ThetaCharacter};
use crate::sl2::{FiniteSubgroup, Gen, GroupSpec, Mat2, ModMat2};
use num_integer::Integer;
use std::collections::{HashMap, HashSet};

/// Least common multiple of the cusp widths.
pub fn general_level(cusp_list: &[CuspClass]) -> u64 {
    cusp_list.iter().fold(1u64, |acc, c| acc.lcm(&c.width))
}

/// V₂(G) = G^{ab} ⊗ F₂ for a finite matrix group, with an evaluation map.
#[derive(Clone, Debug)]
pub struct V2Space {
    /// Ambient group handle.
    pub group: FiniteSubgroup,
    dim: usize,
    /// Dual basis: functionals on the generator coordinates.
    duals: Vec<BitVec>,
    /// Generator-coordinate vector of each group element.
    elem_vec: HashMap<ModMat2, BitVec>,
}

impl V2Space {
    /// Dimension of G^{ab} ⊗ F₂.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Image of a group element in F₂^dim (coordinates over the dual basis).
    pub fn image(&self, x: &ModMat2) -> Result<BitVec> {
        let raw = self.elem_vec.get(x).ok_or_else(|| Error::NotMember {
            context: "element is not in the finite group".into(),
        })?;
        let mut v = BitVec::zeros(self.dim);
        for (k, chi) in self.duals.iter().enumerate() {
            v.set(k, chi.dot(raw));
        }
        Ok(v)
    }
}

/// Compute V₂(G) by normal-closure BFS: the derived-and-squares subgroup H
/// is generated by all commutators and squares of generators; G/H is
/// elementary abelian and its order must be 2^dim.
pub fn v2_of_finite(g: &FiniteSubgroup, cap: usize) -> Result<V2Space> {
    let ngens = g.gens.len();
    // Seed H with generator commutators and squares, close under
    // conjugation, then under products.
    let mut seeds: Vec<ModMat2> = Vec::new();
    for a in &g.gens {
        seeds.push(a.mul(a));
        for b in &g.gens {
            let comm = a.inv().mul(&b.inv()).mul(a).mul(b);
            seeds.push(comm);
        }
    }
    let mut conj_closed: HashSet<ModMat2> = seeds.iter().copied().collect();
    let mut frontier: Vec<ModMat2> = conj_closed.iter().copied().collect();
    while let Some(h) = frontier.pop() {
        for x in &g.gens {
            let c = x.inv().mul(&h).mul(x);
            if conj_closed.insert(c) {
                if conj_closed.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                frontier.push(c);
            }
        }
    }
    let seeds: Vec<ModMat2> = conj_closed.into_iter().collect();
    let h = FiniteSubgroup::generate(g.modulus, &seeds, cap)?;
    let quot = g.order() / h.order();
    if g.order() % h.order() != 0 || !quot.is_power_of_two() {
        return Err(Error::Inconsistency {
            context: format!(
                "quotient order {quot} is not a power of two"
            ),
        });
    }
    let dim = quot.trailing_zeros() as usize;

    // Label every element with a generator-coordinate vector by BFS; path
    // discrepancies are exactly the relations among generator images.
    let mut elem_vec: HashMap<ModMat2, BitVec> = HashMap::new();
    let mut relations: Vec<BitVec> = Vec::new();
    let id = ModMat2::identity(g.modulus);
    elem_vec.insert(id, BitVec::zeros(ngens));
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        let vx = elem_vec[&x].clone();
        for (i, gi) in g.gens.iter().enumerate() {
            let y = x.mul(gi);
            let mut vy = vx.clone();
            vy.flip(i);
            match elem_vec.get(&y) {
                None => {
                    elem_vec.insert(y, vy);
                    queue.push(y);
                }
                Some(old) => {
                    let mut r = old.clone();
                    r.xor_assign(&vy);
                    if !r.is_zero() {
                        relations.push(r);
                    }
                }
            }
        }
    }
    if elem_vec.len() != g.order() {
        return Err(Error::Inconsistency {
            context: "generator set does not generate the group".into(),
        });
    }
    // Elements of H must map to relation-space vectors: functionals
    // orthogonal to all relations kill H, giving homs G -> F2.
    let duals = kernel_basis(&relations, ngens);
    if duals.len() != dim {
        return Err(Error::Inconsistency {
            context: format!(
                "V2 dual dimension {} disagrees with quotient order 2^{dim}",
                duals.len()
            ),
        });
    }
    Ok(V2Space {
        group: g.clone(),
        dim,
        duals,
        elem_vec,
    })
}

/// Report of the shear-span criterion on Γ/Γ(2N).
#[derive(Clone, Debug)]
pub struct ShearSpanReport {
    /// Order of the finite quotient Γ/Γ(2N).
    pub quotient_order: usize,
    /// dim V₂(Γ/Γ(2N)).
    pub v2_dim: usize,
    /// Rank of the shear images inside V₂.
    pub shear_rank: usize,
    /// True iff the shear images span V₂.
    pub spans: bool,
}

/// Shear-span criterion: the cusp-shear images span V₂(Γ/Γ(2N)) iff no
/// nontrivial signed lift of Γ is congruence.
pub fn shear_span_check(
    spec: &GroupSpec,
    pres: &FreePresentation,
    cap: usize,
) -> Result<ShearSpanReport> {
    let two_n = spec.two_n();
    let gens: Vec<ModMat2> = pres
        .generators()
        .iter()
        .map(|g| g.matrix.reduce(two_n))
        .collect();
    let quotient = FiniteSubgroup::generate(two_n, &gens, cap)?;
    let v2 = v2_of_finite(&quotient, cap)?;
    let mut rows = Vec::new();
    for c in pres.cusp_list() {
        let shear = crate::cosets::cusp_shear(spec, pres.table(), c)?;
        rows.push(v2.image(&shear.reduce(two_n))?);
    }
    let shear_rank = rank(&rows);
    Ok(ShearSpanReport {
        quotient_order: quotient.order(),
        v2_dim: v2.dim(),
        shear_rank,
        spans: shear_rank == v2.dim(),
    })
}

/// Method used to settle a congruence question.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Direct evaluation on Schreier generators of Γ(2N).
    Direct,
    /// The shear-span criterion on V₂(Γ/Γ(2N)).
    Span,
}

/// Verdict on whether the lift attached to a character is congruence.
#[derive(Clone, Debug)]
pub struct CongruenceVerdict {
    /// The character decided on.
    pub character: ThetaCharacter,
    /// True iff Γν is a congruence subgroup.
    pub is_congruence: bool,
    /// Deciding method.
    pub method: Method,
    /// A Γ(2N) generator where the character is nonzero, when
    /// noncongruence was decided directly.
    pub witness: Option<Mat2>,
}

/// Schreier generator data of Γ(2N): parity vector in Γ's presentation
/// plus an exact witness matrix.
#[derive(Debug)]
pub struct PrincipalGenerators {
    /// Parity vector of each generator with respect to Γ's presentation.
    pub vectors: Vec<BitVec>,
    /// The generator matrices, sign-normalized into Γ(2N).
    pub matrices: Vec<Mat2>,
}

/// Enumerate Schreier generators of Γ(2N) from its own coset table and
/// express each as a parity vector in Γ's presentation, by scanning the
/// tree words rather than re-decomposing the matrices.
pub fn principal_generators(
    spec: &GroupSpec,
    pres: &FreePresentation,
) -> Result<PrincipalGenerators> {
    let two_n = spec.two_n();
    let p = CosetTable::build_conditions(Conditions { n1: 1, n2: two_n });
    // Tree word (flat letters, root to coset) for every coset of Γ(2N).
    let mut words: Vec<Vec<(Gen, bool)>> = vec![Vec::new(); p.size()];
    for i in 1..p.size() {
        // BFS order guarantees parents precede children.
        let (parent, g) = p.tree_parent(i).expect("non-root has a parent");
        let mut w = words[parent].clone();
        w.push((g, false));
        words[i] = w;
    }
    let scan_gen = |i: usize, g: Gen, j: usize| -> BitVec {
        let mut letters = words[i].clone();
        letters.push((g, false));
        letters.extend(words[j].iter().rev().map(|&(x, inv)| (x, !inv)));
        let (v, end) = pres.scan(&letters, 0);
        debug_assert_eq!(end, 0, "principal generator must lie in the group");
        v
    };
    let mut vectors = Vec::new();
    let mut matrices = Vec::new();
    for i in 0..p.size() {
        let j = p.act_t(i);
        if p.tree_parent(j) != Some((i, Gen::T)) {
            vectors.push(scan_gen(i, Gen::T, j));
            let m = p.rep(i).mul(&Mat2::t()).mul(&p.rep(j).inv());
            matrices.push(normalize_principal(&p, m)?);
        }
        let j = p.act_s(i);
        if i < j
            && p.tree_parent(j) != Some((i, Gen::S))
            && p.tree_parent(i) != Some((j, Gen::S))
        {
            vectors.push(scan_gen(i, Gen::S, j));
            let m = p.rep(i).mul(&Mat2::s()).mul(&p.rep(j).inv());
            matrices.push(normalize_principal(&p, m)?);
        }
    }
    Ok(PrincipalGenerators { vectors, matrices })
}

fn normalize_principal(p: &CosetTable, m: Mat2) -> Result<Mat2> {
    if p.member_exact(&m) {
        Ok(m)
    } else {
        let n = m.neg();
        if p.member_exact(&n) {
            Ok(n)
        } else {
            Err(Error::Inconsistency {
                context: "principal Schreier generator escaped its group".into(),
            })
        }
    }
}

/// Direct congruence test: χ is congruence iff it vanishes on every
/// Schreier generator of Γ(2N).
pub fn is_congruence_lift(
    character: &ThetaCharacter,
    pres: &FreePresentation,
    principal: &PrincipalGenerators,
) -> CongruenceVerdict {
    debug_assert_eq!(character.fingerprint(), pres.fingerprint());
    for (v, m) in principal.vectors.iter().zip(&principal.matrices) {
        if character.bits().dot(v) {
            return CongruenceVerdict {
                character: character.clone(),
                is_congruence: false,
                method: Method::Direct,
                witness: Some(m.clone()),
            };
        }
    }
    CongruenceVerdict {
        character: character.clone(),
        is_congruence: true,
        method: Method::Direct,
        witness: None,
    }
}

/// Verdict of the Hecke-vanishing corollary for a prime p and odd weight k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeckeVerdict {
    /// T_p is identically zero on M_k(Γν) and the congruence closure of
    /// Γν is ⟨±1, Γ⟩.
    TpVanishes {
        /// The Hecke prime.
        p: u64,
        /// The odd weight.
        k: u64,
    },
    /// Trivial character: the Hecke action is the usual one, no claim.
    NoClaim,
}

/// Certified Hecke verdict: requires gcd(p, N) = 1 and odd k; for a
/// nontrivial (hence noncongruence) character the Hecke operator vanishes.
pub fn hecke_closure_verdict(
    character: &ThetaCharacter,
    spec: &GroupSpec,
    p: u64,
    k: u64,
) -> Result<HeckeVerdict> {
    if p < 2 || p.gcd(&spec.n()) != 1 {
        return Err(Error::InvalidInput {
            context: format!("Hecke prime {p} must be coprime to the level {}", spec.n()),
        });
    }
    if k % 2 == 0 {
        return Err(Error::InvalidInput {
            context: format!("weight {k} must be odd for the vanishing statement"),
        });
    }
    if character.is_omega() {
        Ok(HeckeVerdict::NoClaim)
    } else {
        Ok(HeckeVerdict::TpVanishes { p, k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::cusps;
    use num_bigint::BigUint;

    const CAP: usize = 5_000_000;

    fn pres_for(n: u64) -> (GroupSpec, FreePresentation) {
        let spec = GroupSpec::gamma1(n).unwrap();
        let pres = FreePresentation::build(CosetTable::build(&spec)).unwrap();
        (spec, pres)
    }

    #[test]
    fn general_level_examples() {
        let (_, p5) = pres_for(5);
        assert_eq!(general_level(p5.cusp_list()), 5);
        let (_, p11) = pres_for(11);
        assert_eq!(general_level(p11.cusp_list()), 11);
        // General level is N or N/2.
        let spec = GroupSpec::new(1, 10).unwrap();
        let t = CosetTable::build(&spec);
        let gl = general_level(&cusps(&t));
        assert!(gl == 10 || gl == 5);
        assert_eq!(gl, 10);
    }

    #[test]
    fn v2_dimension_table() {
        // Full SL2(F2): abelianization Z/2, generated by the image of T.
        let g = FiniteSubgroup::from_conditions(2, 1, 1).unwrap();
        let v2 = v2_of_finite(&g, CAP).unwrap();
        assert_eq!(v2.dim(), 1);
        let t = Mat2::t().reduce(2);
        assert!(!v2.image(&t).unwrap().is_zero());
        // Principal kernel mod 4: elementary abelian of rank 3.
        let g = FiniteSubgroup::from_conditions(4, 1, 2).unwrap();
        assert_eq!(v2_of_finite(&g, CAP).unwrap().dim(), 3);
        // Unipotent-condition kernel mod 4: rank 2.
        let g = FiniteSubgroup::from_conditions(4, 2, 1).unwrap();
        assert_eq!(v2_of_finite(&g, CAP).unwrap().dim(), 2);
    }

    #[test]
    fn v2_of_odd_group_is_trivial() {
        // Γ₁(5)/Γ(5) has odd order 5, so V₂ vanishes.
        let g = FiniteSubgroup::from_conditions(5, 5, 1).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(v2_of_finite(&g, CAP).unwrap().dim(), 0);
    }

    #[test]
    fn v2_evaluation_is_homomorphism() {
        let g = FiniteSubgroup::from_conditions(4, 1, 2).unwrap();
        let v2 = v2_of_finite(&g, CAP).unwrap();
        for a in &g.elements {
            for b in &g.elements {
                let mut sum = v2.image(a).unwrap();
                sum.xor_assign(&v2.image(b).unwrap());
                assert_eq!(v2.image(&a.mul(b)).unwrap(), sum);
            }
        }
    }

    #[test]
    fn shear_span_holds_for_gamma1_11() {
        let (spec, pres) = pres_for(11);
        let report = shear_span_check(&spec, &pres, CAP).unwrap();
        assert!(report.spans);
        assert_eq!(report.quotient_order, 66);
    }

    #[test]
    fn shear_span_holds_for_gamma1_5() {
        let (spec, pres) = pres_for(5);
        let report = shear_span_check(&spec, &pres, CAP).unwrap();
        assert!(report.spans);
    }

    #[test]
    fn shear_span_with_even_principal_part() {
        let spec = GroupSpec::new(1, 10).unwrap();
        let pres = FreePresentation::build(CosetTable::build(&spec)).unwrap();
        let report = shear_span_check(&spec, &pres, CAP).unwrap();
        assert_eq!(report.quotient_order, 8);
        assert_eq!(report.v2_dim, 3);
        assert!(report.spans);
    }

    #[test]
    fn direct_congruence_test_gamma1_11() {
        let (spec, pres) = pres_for(11);
        let principal = principal_generators(&spec, &pres).unwrap();
        let space = pres.theta_characters().unwrap();
        // Trivial character: congruence.
        let omega = ThetaCharacter::omega(&pres);
        assert!(is_congruence_lift(&omega, &pres, &principal).is_congruence);
        // All three nontrivial characters: noncongruence with witness.
        for k in 1u32..4 {
            let chi = space.get(&BigUint::from(k)).unwrap();
            let verdict = is_congruence_lift(&chi, &pres, &principal);
            assert!(!verdict.is_congruence);
            let w = verdict.witness.unwrap();
            // The witness is in Γ(22) and the character is odd on it.
            assert!(w.reduce(22).is_identity() || w.reduce(22).neg().is_identity());
            assert!(chi.evaluate(&pres, &w).unwrap());
        }
        // Agreement with the span method: span holds, so exactly ω is
        // congruence.
        let report = shear_span_check(&spec, &pres, CAP).unwrap();
        assert!(report.spans);
    }

    #[test]
    fn principal_generator_images_cover_v2() {
        // The surjection Γ -> Γ/Γ(2N) is onto on V₂: generator images span.
        let (spec, pres) = pres_for(11);
        let two_n = spec.two_n();
        let gens: Vec<ModMat2> = pres
            .generators()
            .iter()
            .map(|g| g.matrix.reduce(two_n))
            .collect();
        let quotient = FiniteSubgroup::generate(two_n, &gens, CAP).unwrap();
        let v2 = v2_of_finite(&quotient, CAP).unwrap();
        let rows: Vec<BitVec> = gens.iter().map(|g| v2.image(g).unwrap()).collect();
        assert_eq!(rank(&rows), v2.dim());
    }

    #[test]
    fn hecke_verdicts() {
        let (spec, pres) = pres_for(11);
        let space = pres.theta_characters().unwrap();
        let omega = ThetaCharacter::omega(&pres);
        let chi = space.get(&BigUint::from(1u32)).unwrap();
        assert_eq!(
            hecke_closure_verdict(&chi, &spec, 3, 1).unwrap(),
            HeckeVerdict::TpVanishes { p: 3, k: 1 }
        );
        assert_eq!(
            hecke_closure_verdict(&omega, &spec, 3, 1).unwrap(),
            HeckeVerdict::NoClaim
        );
        assert!(hecke_closure_verdict(&chi, &spec, 11, 1).is_err());
        assert!(hecke_closure_verdict(&chi, &spec, 3, 2).is_err());
    }
}
