//! Schreier presentation of PΓ, cusp-shear words, theta characters as F₂
//! functionals, signed lifts, and trace separation of distinct lifts.
//!
//! # Construction
//!
//! The Schreier generating set comes from the BFS spanning tree of the
//! coset graph: one generator per non-tree edge (T-edges directed, S-edges
//! as unordered pairs), each realized as the matrix rep·X·rep′⁻¹ with the
//! sign normalized into Γ. The set is redundant; the free rank of PΓ is
//! recovered as the dimension of the space of F₂ functionals killed by the
//! (TS)³ relator cycles, and must equal both 1 + size/6 and 2g + n − 1.
//!
//! Characters are stored by their values on the full Schreier set, which
//! is well defined exactly on the relator kernel, so the data is
//! presentation-free as a function on the group.

use crate::cosets::{cusps, genus, CosetTable, CuspClass};
use crate::error::{Error, Result};
use crate::f2::{kernel_basis, BitVec, Span};
use crate::sl2::{word_decompose, Gen, Mat2};
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use std::collections::HashMap;

/// A Schreier generator: the non-tree edge it comes from and its matrix in Γ.
#[derive(Clone, Debug)]
pub struct SchreierGen {
    /// Source coset of the edge (least index of the pair for S-edges).
    pub coset: usize,
    /// Edge letter.
    pub letter: Gen,
    /// rep(coset)·letter·rep(target)⁻¹, sign-normalized into Γ.
    pub matrix: Mat2,
}

/// Presentation data for PΓ over a coset table.
#[derive(Debug)]
pub struct FreePresentation {
    table: CosetTable,
    gens: Vec<SchreierGen>,
    edge_index: HashMap<(usize, Gen), usize>,
    rank: usize,
    relator_rows: Vec<BitVec>,
    cusp_list: Vec<CuspClass>,
    genus: u64,
}

impl FreePresentation {
    /// Build the presentation, verifying both rank formulas.
    pub fn build(table: CosetTable) -> Result<FreePresentation> {
        let size = table.size();
        let mut gens = Vec::new();
        let mut edge_index = HashMap::new();
        for i in 0..size {
            // T-edge i -> j, non-tree (self-loops are never tree edges).
            let j = table.act_t(i);
            if table.tree_parent(j) != Some((i, Gen::T)) {
                let m = table.rep(i).mul(&Mat2::t()).mul(&table.rep(j).inv());
                let m = sign_into(&table, m)?;
                edge_index.insert((i, Gen::T), gens.len());
                gens.push(SchreierGen {
                    coset: i,
                    letter: Gen::T,
                    matrix: m,
                });
            }
            // S-edge {i, j}, recorded once at the smaller index.
            let j = table.act_s(i);
            if i < j
                && table.tree_parent(j) != Some((i, Gen::S))
                && table.tree_parent(i) != Some((j, Gen::S))
            {
                let m = table.rep(i).mul(&Mat2::s()).mul(&table.rep(j).inv());
                let m = sign_into(&table, m)?;
                let idx = gens.len();
                edge_index.insert((i, Gen::S), idx);
                edge_index.insert((j, Gen::S), idx);
                gens.push(SchreierGen {
                    coset: i,
                    letter: Gen::S,
                    matrix: m,
                });
            }
        }
        let ngens = gens.len();
        let cusp_list = cusps(&table);
        let g = genus(&table, &cusp_list)?;
        let n = cusp_list.len() as u64;
        let mut pres = FreePresentation {
            table,
            gens,
            edge_index,
            rank: 0,
            relator_rows: Vec::new(),
            cusp_list,
            genus: g,
        };
        // (TS)^3 relator cycles: one parity row per orbit of S∘T.
        let mut seen = vec![false; size];
        let word: Vec<(Gen, bool)> = vec![
            (Gen::T, false),
            (Gen::S, false),
            (Gen::T, false),
            (Gen::S, false),
            (Gen::T, false),
            (Gen::S, false),
        ];
        for i in 0..size {
            if seen[i] {
                continue;
            }
            let mut c = i;
            loop {
                seen[c] = true;
                c = pres.table.act_s(pres.table.act_t(c));
                if c == i {
                    break;
                }
            }
            let (row, end) = pres.scan(&word, i);
            debug_assert_eq!(end, i);
            pres.relator_rows.push(row);
        }
        let hom_dim = kernel_basis(&pres.relator_rows, ngens).len() as u64;
        let by_index = 1 + size as u64 / 6;
        let by_surface = 2 * g + n - 1;
        if hom_dim != by_index || hom_dim != by_surface {
            return Err(Error::Inconsistency {
                context: format!(
                    "free rank mismatch: kernel {hom_dim}, 1+size/6 = {by_index}, 2g+n-1 = {by_surface}"
                ),
            });
        }
        pres.rank = hom_dim as usize;
        Ok(pres)
    }

    /// Underlying coset table.
    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    /// Schreier generators (redundant generating set, one per non-tree edge).
    pub fn generators(&self) -> &[SchreierGen] {
        &self.gens
    }

    /// Number of Schreier generators (character vector length).
    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Free rank of PΓ, verified to equal both 1 + size/6 and 2g + n − 1.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Genus of the quotient curve.
    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// Cusp classes of the table.
    pub fn cusp_list(&self) -> &[CuspClass] {
        &self.cusp_list
    }

    /// Fingerprint of the underlying table (guards serialized characters).
    pub fn fingerprint(&self) -> u64 {
        self.table.fingerprint()
    }

    /// Scan a flat word through the table from `start`, accumulating the
    /// parity of every non-tree edge crossed; returns (vector, end coset).
    pub fn scan(&self, letters: &[(Gen, bool)], start: usize) -> (BitVec, usize) {
        let mut v = BitVec::zeros(self.gens.len());
        let mut cur = start;
        for &(g, inv) in letters {
            let next = self.table.act(cur, g, inv);
            let key = match (g, inv) {
                (Gen::T, false) => (cur, Gen::T),
                (Gen::T, true) => (next, Gen::T),
                (Gen::S, _) => (cur.min(next), Gen::S),
            };
            if let Some(&idx) = self.edge_index.get(&key) {
                v.flip(idx);
            }
            cur = next;
        }
        (v, cur)
    }

    /// Parity vector of a group element: its values under every character.
    /// Errors if ±M is not in ±Γ.
    pub fn word_vector(&self, m: &Mat2) -> Result<BitVec> {
        let word = word_decompose(m)?;
        let (v, end) = self.scan(&word.flat_letters(), 0);
        if end != 0 {
            return Err(Error::NotMember {
                context: format!("{m} is not in the group up to sign"),
            });
        }
        Ok(v)
    }

    /// Per-cusp shear parity vectors: the width-power shear conjugated to
    /// each cusp. Tree words cross only tree edges, so the vector is the
    /// scan of T^width from the cusp's base coset.
    pub fn shear_vectors(&self) -> Vec<BitVec> {
        self.cusp_list
            .iter()
            .map(|c| {
                let base = c.orbit[0];
                let word: Vec<(Gen, bool)> =
                    std::iter::repeat((Gen::T, false)).take(c.width as usize).collect();
                let (v, end) = self.scan(&word, base);
                debug_assert_eq!(end, base);
                v
            })
            .collect()
    }

    /// Shear words in Schreier-generator crossings, one per cusp, ordered
    /// as the cusps are: the generator indices hit while tracing T^width
    /// around the cycle.
    pub fn cusp_shear_words(&self) -> Vec<Vec<usize>> {
        self.cusp_list
            .iter()
            .map(|c| {
                let mut out = Vec::new();
                let mut cur = c.orbit[0];
                for _ in 0..c.width {
                    let next = self.table.act_t(cur);
                    if let Some(&idx) = self.edge_index.get(&(cur, Gen::T)) {
                        out.push(idx);
                    }
                    cur = next;
                }
                out
            })
            .collect()
    }

    /// The space of theta characters: functionals killed by the relators
    /// and by every cusp shear. Dimension is verified to be 2g.
    pub fn theta_characters(&self) -> Result<CharacterSpace> {
        let mut rows = self.relator_rows.clone();
        rows.extend(self.shear_vectors());
        let basis = kernel_basis(&rows, self.gens.len());
        if basis.len() as u64 != 2 * self.genus {
            return Err(Error::Inconsistency {
                context: format!(
                    "theta character space has dimension {}, expected {}",
                    basis.len(),
                    2 * self.genus
                ),
            });
        }
        Ok(CharacterSpace {
            basis,
            ngens: self.gens.len(),
            fingerprint: self.fingerprint(),
        })
    }

    /// The space of all F₂ characters of PΓ (relator kernel only).
    pub fn all_characters(&self) -> CharacterSpace {
        CharacterSpace {
            basis: kernel_basis(&self.relator_rows, self.gens.len()),
            ngens: self.gens.len(),
            fingerprint: self.fingerprint(),
        }
    }
}

fn sign_into(table: &CosetTable, m: Mat2) -> Result<Mat2> {
    if table.member_exact(&m) {
        Ok(m)
    } else {
        let n = m.neg();
        if table.member_exact(&n) {
            Ok(n)
        } else {
            Err(Error::Inconsistency {
                context: "Schreier generator not in the group up to sign".into(),
            })
        }
    }
}

/// An F₂ character space with lazy enumeration over a kernel basis.
#[derive(Clone, Debug)]
pub struct CharacterSpace {
    basis: Vec<BitVec>,
    ngens: usize,
    fingerprint: u64,
}

impl CharacterSpace {
    /// Dimension over F₂.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors.
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// Total count 2^dim, computed without materialization.
    pub fn count(&self) -> BigUint {
        BigUint::one() << self.basis.len()
    }

    /// Character at a given index, little-endian over basis combinations.
    /// Index 0 is the trivial character ω.
    pub fn get(&self, index: &BigUint) -> Option<ThetaCharacter> {
        if index >= &self.count() {
            return None;
        }
        let mut bits = BitVec::zeros(self.ngens);
        for (i, b) in self.basis.iter().enumerate() {
            if index.bit(i as u64) {
                bits.xor_assign(b);
            }
        }
        Some(ThetaCharacter {
            bits,
            fingerprint: self.fingerprint,
        })
    }

    /// Lazy iteration in index order (caller bounds the traversal).
    pub fn iter(&self) -> impl Iterator<Item = ThetaCharacter> + '_ {
        let mut idx = BigUint::from(0u32);
        std::iter::from_fn(move || {
            let out = self.get(&idx)?;
            idx += 1u32;
            Some(out)
        })
    }

    /// Uniform random sample.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ThetaCharacter {
        let mut bits = BitVec::zeros(self.ngens);
        for b in &self.basis {
            if rng.gen::<bool>() {
                bits.xor_assign(b);
            }
        }
        ThetaCharacter {
            bits,
            fingerprint: self.fingerprint,
        }
    }

    /// Membership of a raw functional vector.
    pub fn contains_vector(&self, v: &BitVec) -> bool {
        Span::new(&self.basis).contains(v)
    }
}

/// A theta character: an F₂ functional on the Schreier generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCharacter {
    bits: BitVec,
    fingerprint: u64,
}

impl ThetaCharacter {
    /// The trivial character ω for a presentation.
    pub fn omega(pres: &FreePresentation) -> ThetaCharacter {
        ThetaCharacter {
            bits: BitVec::zeros(pres.ngens()),
            fingerprint: pres.fingerprint(),
        }
    }

    /// Wrap a raw functional (values on the Schreier generators).
    pub fn from_bits(pres: &FreePresentation, bits: BitVec) -> ThetaCharacter {
        assert_eq!(bits.len(), pres.ngens());
        ThetaCharacter {
            bits,
            fingerprint: pres.fingerprint(),
        }
    }

    /// True for the all-zero character ω.
    pub fn is_omega(&self) -> bool {
        self.bits.is_zero()
    }

    /// Raw functional vector.
    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Guarding fingerprint of the presentation this belongs to.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    fn check(&self, pres: &FreePresentation) -> Result<()> {
        if self.fingerprint != pres.fingerprint() {
            return Err(Error::InvalidInput {
                context: "character belongs to a different presentation".into(),
            });
        }
        Ok(())
    }

    /// Value of the character on a group element (projective membership).
    pub fn evaluate(&self, pres: &FreePresentation, m: &Mat2) -> Result<bool> {
        self.check(pres)?;
        Ok(self.bits.dot(&pres.word_vector(m)?))
    }

    /// The signed lift: sign-normalize M into Γ, then flip the sign when
    /// the character is nontrivial on its word.
    pub fn lift_evaluate(&self, pres: &FreePresentation, m: &Mat2) -> Result<Mat2> {
        self.check(pres)?;
        let base = sign_into(pres.table(), m.clone()).map_err(|_| Error::NotMember {
            context: format!("{m} is not in the group up to sign"),
        })?;
        if self.evaluate(pres, &base)? {
            Ok(base.neg())
        } else {
            Ok(base)
        }
    }

    /// Serialize as "hex@fingerprint".
    pub fn serialize(&self) -> String {
        format!("{}@{:016x}", self.bits.to_hex(), self.fingerprint)
    }

    /// Parse "hex@fingerprint" against a presentation, rejecting
    /// cross-presentation data.
    pub fn deserialize(s: &str, pres: &FreePresentation) -> Result<ThetaCharacter> {
        let (hex, fp) = s.split_once('@').ok_or_else(|| Error::InvalidInput {
            context: format!("bad character string '{s}'"),
        })?;
        let fingerprint = u64::from_str_radix(fp, 16).map_err(|_| Error::InvalidInput {
            context: format!("bad fingerprint '{fp}'"),
        })?;
        if fingerprint != pres.fingerprint() {
            return Err(Error::InvalidInput {
                context: "character fingerprint does not match this presentation".into(),
            });
        }
        let bits = BitVec::from_hex(hex, pres.ngens()).ok_or_else(|| Error::InvalidInput {
            context: format!("bad character bits '{hex}'"),
        })?;
        Ok(ThetaCharacter {
            bits,
            fingerprint,
        })
    }
}

/// Search budget for [`trace_separation`].
#[derive(Clone, Copy, Debug)]
pub struct SeparationBudget {
    /// Maximum word length over Schreier generators.
    pub max_len: usize,
    /// Number of random words after the short exhaustive phase.
    pub random_samples: usize,
    /// RNG seed for the random phase (deterministic by default).
    pub seed: u64,
}

impl Default for SeparationBudget {
    fn default() -> Self {
        SeparationBudget {
            max_len: 12,
            random_samples: 100_000,
            seed: 0x5eed_0001,
        }
    }
}

/// Find d ∈ Γ with χ₁(d) ≠ χ₂(d) and |trace d| > 2: a witness that the two
/// signed lifts have opposite nonzero traces at d.
pub fn trace_separation(
    pres: &FreePresentation,
    chi1: &ThetaCharacter,
    chi2: &ThetaCharacter,
    budget: &SeparationBudget,
) -> Result<Mat2> {
    use num_traits::Signed;
    chi1.check(pres)?;
    chi2.check(pres)?;
    if chi1 == chi2 {
        return Err(Error::InvalidInput {
            context: "trace separation needs two distinct characters".into(),
        });
    }
    let mut delta = chi1.bits.clone();
    delta.xor_assign(&chi2.bits);
    let two = num_bigint::BigInt::from(2);
    let good = |m: &Mat2, parity: bool| parity && m.trace().abs() > two;

    // Phase 1: single generators, then pairs (exhaustive short words).
    let gens = pres.generators();
    for (i, g) in gens.iter().enumerate() {
        if good(&g.matrix, delta.get(i)) {
            return Ok(g.matrix.clone());
        }
    }
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            let parity = delta.get(i) ^ delta.get(j);
            if !parity {
                continue;
            }
            let m = gi.matrix.mul(&gj.matrix);
            if good(&m, parity) {
                return Ok(m);
            }
        }
    }
    // Phase 2: seeded random words up to max_len.
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.random_samples {
        let len = rng.gen_range(1..=budget.max_len);
        let mut m = Mat2::identity();
        let mut parity = false;
        for _ in 0..len {
            let k = rng.gen_range(0..gens.len());
            m = m.mul(&gens[k].matrix);
            parity ^= delta.get(k);
        }
        if good(&m, parity) {
            return Ok(m);
        }
    }
    Err(Error::BudgetExhausted {
        context: "no separating hyperbolic word within the search budget".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::Conditions;
    use crate::sl2::GroupSpec;
    use rand::SeedableRng;

    fn pres_for(n: u64) -> FreePresentation {
        let spec = GroupSpec::gamma1(n).unwrap();
        FreePresentation::build(CosetTable::build(&spec)).unwrap()
    }

    #[test]
    fn ranks_match_both_formulas() {
        assert_eq!(pres_for(5).rank(), 3);
        assert_eq!(pres_for(11).rank(), 11);
        assert_eq!(pres_for(23).rank(), 45);
    }

    #[test]
    fn generator_matrices_are_members_and_match_vectors() {
        let p = pres_for(11);
        for (i, g) in p.generators().iter().enumerate() {
            assert!(p.table().member_exact(&g.matrix));
            // The scan of the generator's own matrix hits exactly itself
            // modulo the relator span: its vector differs from the unit
            // vector by something every character kills.
            let v = p.word_vector(&g.matrix).unwrap();
            let mut diff = v.clone();
            diff.xor_assign(&BitVec::unit(p.ngens(), i));
            for chi in p.all_characters().basis() {
                assert!(!chi.dot(&diff));
            }
        }
    }

    #[test]
    fn theta_dimensions() {
        assert_eq!(pres_for(5).theta_characters().unwrap().dim(), 0);
        let p11 = pres_for(11).theta_characters().unwrap();
        assert_eq!(p11.dim(), 2);
        assert_eq!(p11.count(), BigUint::from(4u32));
        assert_eq!(pres_for(23).theta_characters().unwrap().dim(), 24);
        assert_eq!(
            pres_for(23).theta_characters().unwrap().count(),
            BigUint::from(1u64) << 24
        );
    }

    #[test]
    fn shear_span_has_one_relation() {
        // The n shear classes span at most n-1 dimensions in homology.
        let p = pres_for(11);
        let shears = p.shear_vectors();
        // Project onto the character pairing: rank of the matrix of values
        // of the hom basis on shears.
        let basis = p.all_characters();
        let rows: Vec<BitVec> = shears
            .iter()
            .map(|s| {
                let mut r = BitVec::zeros(basis.dim());
                for (k, chi) in basis.basis().iter().enumerate() {
                    r.set(k, chi.dot(s));
                }
                r
            })
            .collect();
        let rank = crate::f2::rank(&rows);
        let n = p.cusp_list().len();
        assert_eq!(rank, n - 1);
    }

    #[test]
    fn shear_word_for_infinity_is_single_t_generator() {
        let p = pres_for(5);
        let words = p.cusp_shear_words();
        // The cusp containing coset 0 is infinity (width 1): its word is a
        // single T self-loop generator.
        let inf = p
            .cusp_list()
            .iter()
            .position(|c| c.orbit.contains(&0))
            .unwrap();
        assert_eq!(words[inf].len(), 1);
        let g = &p.generators()[words[inf][0]];
        assert_eq!(g.matrix, Mat2::t());
    }

    #[test]
    fn lift_evaluate_signs() {
        let p = pres_for(11);
        let space = p.theta_characters().unwrap();
        let omega = ThetaCharacter::omega(&p);
        let t = Mat2::t();
        assert_eq!(omega.lift_evaluate(&p, &t).unwrap(), t);
        // Shears stay unsigned under every theta character.
        let chi = space.get(&BigUint::from(1u32)).unwrap();
        for c in p.cusp_list() {
            let shear = crate::cosets::cusp_shear(
                &GroupSpec::gamma1(11).unwrap(),
                p.table(),
                c,
            )
            .unwrap();
            assert_eq!(chi.lift_evaluate(&p, &shear).unwrap(), shear);
        }
        // A character nontrivial on a generator flips that generator.
        let idx = (0..p.ngens()).find(|&i| chi.bits().get(i)).unwrap();
        let g = p.generators()[idx].matrix.clone();
        assert_eq!(chi.lift_evaluate(&p, &g).unwrap(), g.neg());
    }

    #[test]
    fn characters_are_homomorphisms() {
        let p = pres_for(11);
        let space = p.theta_characters().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let chi = space.sample(&mut rng);
            let w1 = random_member(&p, &mut rng);
            let w2 = random_member(&p, &mut rng);
            let lhs = chi.evaluate(&p, &w1.mul(&w2)).unwrap();
            let rhs = chi.evaluate(&p, &w1).unwrap() ^ chi.evaluate(&p, &w2).unwrap();
            assert_eq!(lhs, rhs);
            // Lift multiplicativity.
            let l12 = chi.lift_evaluate(&p, &w1.mul(&w2)).unwrap();
            let l1 = chi.lift_evaluate(&p, &w1).unwrap();
            let l2 = chi.lift_evaluate(&p, &w2).unwrap();
            assert_eq!(l1.mul(&l2), l12);
        }
    }

    fn random_member(p: &FreePresentation, rng: &mut impl rand::Rng) -> Mat2 {
        let gens = p.generators();
        let len = rng.gen_range(1..=6);
        let mut m = Mat2::identity();
        for _ in 0..len {
            m = m.mul(&gens[rng.gen_range(0..gens.len())].matrix);
        }
        m
    }

    #[test]
    fn presentation_independent_character_sets() {
        // Two spanning trees of the same group give the same character set
        // as functions on matrices.
        let spec = GroupSpec::gamma1(11).unwrap();
        let a = FreePresentation::build(CosetTable::build(&spec)).unwrap();
        let b = FreePresentation::build(CosetTable::build_conditions_ordered(
            Conditions { n1: 11, n2: 1 },
            [Gen::S, Gen::T],
        ))
        .unwrap();
        let sa = a.theta_characters().unwrap();
        let sb = b.theta_characters().unwrap();
        assert_eq!(sa.dim(), sb.dim());
        // Express each basis character of a in b's coordinates by
        // evaluating on b's generator matrices; it must land in b's space.
        for chi in sa.basis() {
            let chi = ThetaCharacter::from_bits(&a, chi.clone());
            let mut v = BitVec::zeros(b.ngens());
            for (k, g) in b.generators().iter().enumerate() {
                v.set(k, chi.evaluate(&a, &g.matrix).unwrap());
            }
            assert!(sb.contains_vector(&v));
        }
    }

    #[test]
    fn trace_separation_on_elliptic_curve_level() {
        let p = pres_for(11);
        let space = p.theta_characters().unwrap();
        let omega = ThetaCharacter::omega(&p);
        let budget = SeparationBudget::default();
        for k in 1u32..4 {
            let chi = space.get(&BigUint::from(k)).unwrap();
            let d = trace_separation(&p, &omega, &chi, &budget).unwrap();
            use num_traits::Signed;
            assert!(d.trace().abs() > num_bigint::BigInt::from(2));
            let t1 = omega.lift_evaluate(&p, &d).unwrap().trace();
            let t2 = chi.lift_evaluate(&p, &d).unwrap().trace();
            assert_eq!(t1, -t2);
        }
        // Equal characters are rejected.
        assert!(trace_separation(&p, &omega, &omega, &budget).is_err());
    }

    #[test]
    fn serialization_round_trip_and_fingerprint_guard() {
        let p = pres_for(11);
        let space = p.theta_characters().unwrap();
        let chi = space.get(&BigUint::from(3u32)).unwrap();
        let s = chi.serialize();
        let back = ThetaCharacter::deserialize(&s, &p).unwrap();
        assert_eq!(back, chi);
        let other = pres_for(23);
        assert!(ThetaCharacter::deserialize(&s, &other).is_err());
    }
}
