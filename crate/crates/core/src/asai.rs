//! Cusp expansions of newforms of squarefree odd level: ingesting
//! eigenform coefficient data, the three-branch twisted coefficient table,
//! the full expansion at any cusp of the width atlas, the
//! eigenform-independent packaged constants, and vanishing profiles of
//! linear combinations.

use crate::cosets::CuspLabelX1;
use crate::dirichlet::{gauss_sum, sqrt_prime, DirichletChar};
use crate::error::{Error, Result};
use crate::exact::cyclo::CycloElem;
use crate::exact::numfield::{NumField, NumFieldElem};
use crate::exact::qseries::{QSeries, SeriesValuation};
use crate::exact::tower::TowerElem;
use crate::exact::{parse_rat, rat, ratio, FieldElem, Rat};
use crate::arith::{factorize, is_squarefree};
use num_integer::Integer;
use serde::Deserialize;
use std::sync::Arc;

#[derive(Deserialize)]
struct CharJson {
    modulus: u64,
    values_on_generators: Vec<crate::dirichlet::LocalChar>,
}

#[derive(Deserialize)]
struct FieldJson {
    poly: Vec<String>,
    conj: Vec<String>,
}

#[derive(Deserialize)]
struct RecordJson {
    label: String,
    level: u64,
    weight: u64,
    char: CharJson,
    field: FieldJson,
    an: Vec<Vec<String>>,
}

/// A normalized Hecke eigenform given by its coefficient data.
#[derive(Clone, Debug)]
pub struct EigenformRecord {
    /// Display label.
    pub label: String,
    /// Level N (squarefree odd).
    pub level: u64,
    /// Weight k.
    pub weight: u64,
    /// Nebentypus character mod N.
    pub character: DirichletChar,
    /// Coefficient field with its designated involution.
    pub field: Arc<NumField>,
    /// a₁, a₂, … (index 0 holds a₁ = 1).
    an: Vec<NumFieldElem>,
}

impl EigenformRecord {
    /// Parse and validate a JSON record.
    pub fn ingest(json: &str) -> Result<EigenformRecord> {
        let raw: RecordJson = serde_json::from_str(json).map_err(|e| Error::InvalidInput {
            context: format!("eigenform JSON: {e}"),
        })?;
        Self::from_raw(raw)
    }

    /// Parse a JSON array of records.
    pub fn ingest_many(json: &str) -> Result<Vec<EigenformRecord>> {
        let raw: Vec<RecordJson> = serde_json::from_str(json).map_err(|e| Error::InvalidInput {
            context: format!("eigenform JSON: {e}"),
        })?;
        raw.into_iter().map(Self::from_raw).collect()
    }

    fn from_raw(raw: RecordJson) -> Result<EigenformRecord> {
        if raw.level % 2 == 0 || !is_squarefree(raw.level) {
            return Err(Error::InvalidInput {
                context: format!("level {} must be squarefree and odd", raw.level),
            });
        }
        if raw.char.modulus != raw.level {
            return Err(Error::InvalidInput {
                context: "character modulus must equal the level".into(),
            });
        }
        let character = DirichletChar::new(raw.char.modulus, raw.char.values_on_generators)?;
        let parse_vec = |v: &[String]| -> Result<Vec<Rat>> {
            v.iter()
                .map(|s| {
                    parse_rat(s).ok_or_else(|| Error::InvalidInput {
                        context: format!("bad rational '{s}'"),
                    })
                })
                .collect()
        };
        let field = NumField::new(parse_vec(&raw.field.poly)?, parse_vec(&raw.field.conj)?)?;
        let deg = field.degree();
        let mut an = Vec::with_capacity(raw.an.len());
        for (i, coords) in raw.an.iter().enumerate() {
            let coords = parse_vec(coords)?;
            if coords.len() != deg {
                return Err(Error::InvalidInput {
                    context: format!("a_{} has {} coordinates, field degree is {deg}", i + 1, coords.len()),
                });
            }
            an.push(NumFieldElem::new(field.clone(), coords));
        }
        let rec = EigenformRecord {
            label: raw.label,
            level: raw.level,
            weight: raw.weight,
            character,
            field,
            an,
        };
        // Normalization and multiplicativity spot-checks.
        if rec.a(1)? != NumFieldElem::from_rat(rec.field.clone(), rat(1)) {
            return Err(Error::InvalidInput {
                context: "eigenform is not normalized: a_1 != 1".into(),
            });
        }
        for x in 2..=rec.an.len() as u64 {
            for y in x..=rec.an.len() as u64 {
                let n = x * y;
                if n > rec.an.len() as u64 || x.gcd(&y) != 1 {
                    continue;
                }
                if rec.a(n)? != rec.a(x)?.mul(&rec.a(y)?) {
                    return Err(Error::InvalidInput {
                        context: format!("multiplicativity fails: a_{n} != a_{x}·a_{y}"),
                    });
                }
            }
        }
        Ok(rec)
    }

    /// Number of stored coefficients.
    pub fn prec(&self) -> u64 {
        self.an.len() as u64
    }

    /// aₙ (1-indexed).
    pub fn a(&self, n: u64) -> Result<NumFieldElem> {
        if n == 0 || n > self.an.len() as u64 {
            return Err(Error::Series {
                context: format!("a_{n} is beyond the stored precision {}", self.an.len()),
            });
        }
        Ok(self.an[n as usize - 1].clone())
    }

    /// āₙ under the declared involution.
    pub fn a_conj(&self, n: u64) -> Result<NumFieldElem> {
        Ok(self.a(n)?.conj())
    }
}

/// The deterministic Bézout pair: c·M₁ + d·M₂ = 1 with minimal |c|,
/// ties broken toward c > 0.
pub fn bezout_cd(m1: u64, m2: u64) -> (i64, i64) {
    let (m1, m2) = (m1 as i64, m2 as i64);
    if m2 == 1 {
        return (0, 1);
    }
    let e = i64::extended_gcd(&m1, &m2);
    debug_assert_eq!(e.gcd, 1);
    // All solutions: c = e.x + t·m2.
    let mut best: Option<(i64, i64)> = None;
    let t0 = -e.x / m2;
    for t in [t0 - 1, t0, t0 + 1] {
        let c = e.x + t * m2;
        let d = e.y - t * m1;
        match best {
            None => best = Some((c, d)),
            Some((bc, _)) => {
                if c.abs() < bc.abs() || (c.abs() == bc.abs() && c > bc) {
                    best = Some((c, d));
                }
            }
        }
    }
    best.unwrap()
}

fn tower_of(field: &Arc<NumField>, x: &NumFieldElem) -> TowerElem {
    TowerElem::from_nf_coords(field.clone(), x.coords())
}

/// The twisted coefficient table a_n^{(M₁)} for n = 1..=prec:
/// a conjugated character twist of aₙ when gcd(n,M₁)=1, a character twist
/// of āₙ when gcd(n,M₂)=1, extended multiplicatively, with the overlap
/// branches asserted equal whenever gcd(n,N)=1.
pub fn asai_coeff_table(
    rec: &EigenformRecord,
    label: &CuspLabelX1,
    prec: u64,
) -> Result<Vec<TowerElem>> {
    if label.n != rec.level {
        return Err(Error::InvalidInput {
            context: "cusp label level differs from the eigenform level".into(),
        });
    }
    let m1 = label.m1 as i64;
    let m2 = label.m2() as i64;
    let (c, d) = bezout_cd(label.m1, label.m2());
    let chi = &rec.character;
    let field = &rec.field;
    let mut table: Vec<TowerElem> = Vec::with_capacity(prec as usize);
    for n in 1..=prec {
        let ni = n as i64;
        let coprime_m1 = n.gcd(&label.m1) == 1;
        let coprime_m2 = n.gcd(&label.m2()) == 1;
        let v = if coprime_m1 {
            let twist = chi.value(d * ni * m2 + c * m1).conj();
            let v1 = TowerElem::from_cyclo(field.clone(), twist)
                .mul(&tower_of(field, &rec.a(n)?));
            if coprime_m2 {
                let twist2 = chi.value(c * ni * m1 + d * m2);
                let v2 = TowerElem::from_cyclo(field.clone(), twist2)
                    .mul(&tower_of(field, &rec.a_conj(n)?));
                if v1 != v2 {
                    return Err(Error::Inconsistency {
                        context: format!(
                            "twisted coefficient branches disagree at n = {n}"
                        ),
                    });
                }
            }
            v1
        } else if coprime_m2 {
            let twist = chi.value(c * ni * m1 + d * m2);
            TowerElem::from_cyclo(field.clone(), twist)
                .mul(&tower_of(field, &rec.a_conj(n)?))
        } else {
            // Split n into its M₁-part and the rest; both factors are
            // strictly smaller, hence already computed.
            let mut u = 1u64;
            for (p, e) in factorize(n) {
                if label.m1 % p == 0 {
                    u *= p.pow(e);
                }
            }
            let v = n / u;
            debug_assert!(u > 1 && v > 1 && u.gcd(&v) == 1);
            table[u as usize - 1].mul(&table[v as usize - 1])
        };
        table.push(v);
    }
    Ok(table)
}

/// A cusp expansion together with the provenance flag for the packaged
/// trivial-character Gauss-sum constant.
#[derive(Clone, Debug)]
pub struct AsaiExpansion {
    /// The expansion Σ coefficients·q^{j/M₁}, exponent denominator M₁.
    pub series: QSeries<TowerElem>,
    /// True when the prefactor used the adopted constant −1 for a trivial
    /// local character (printed differently in the source derivation).
    pub trivial_constant_branch: bool,
}

/// The eigenform-independent prefactor: the character unit at the cusp
/// times ∏_{p|M₁} p^{−k/2} χ_p(M₁/p) C(χ_p), withOUT the ā_p factors.
fn cusp_unit(
    chi: &DirichletChar,
    k: u64,
    label: &CuspLabelX1,
) -> Result<(CycloElem, bool)> {
    let m1 = label.m1 as i64;
    let m2 = label.m2() as i64;
    let (c, d) = bezout_cd(label.m1, label.m2());
    let (b, _) = label.fraction();
    let a = label.a as i64;
    let mut acc = chi.value(b * c * m1 + m2 * m2 * a * d);
    let mut trivial_branch = false;
    for (p, _) in factorize(label.m1) {
        let local = chi.local_at(p)?;
        if local.is_trivial() {
            trivial_branch = true;
        }
        // p^{-k/2}: rational for even k, a Gauss-sum square root otherwise.
        let pk = if k % 2 == 0 {
            CycloElem::from_rat(ratio(1, (p as i64).pow((k / 2) as u32)))
        } else {
            let root = sqrt_prime(p)?;
            root.scale(&ratio(1, (p as i64).pow(((k + 1) / 2) as u32)))
        };
        acc = acc
            .mul(&pk)
            .mul(&local.value((label.m1 / p) as i64))
            .mul(&gauss_sum(local));
    }
    Ok((acc.normalize(), trivial_branch))
}

/// Full cusp expansion of a single record: prefactor times the twisted
/// coefficient series, exponents n/M₁ for n = 1..prec.
pub fn asai_expand(
    rec: &EigenformRecord,
    label: &CuspLabelX1,
    prec: u64,
) -> Result<AsaiExpansion> {
    for (p, _) in factorize(label.m1) {
        if FieldElem::is_zero(&rec.a(p)?) {
            return Err(Error::Inconsistency {
                context: format!(
                    "a_{p} = 0 contradicts newform nonvanishing at primes of a squarefree level"
                ),
            });
        }
    }
    let (unit, trivial_branch) = cusp_unit(&rec.character, rec.weight, label)?;
    let mut prefactor = TowerElem::from_cyclo(rec.field.clone(), unit);
    for (p, _) in factorize(label.m1) {
        prefactor = prefactor.mul(&tower_of(&rec.field, &rec.a_conj(p)?));
    }
    let table = asai_coeff_table(rec, label, prec)?;
    let mut series = QSeries::new(label.m1, prec as i64 + 1, TowerElem::zero(rec.field.clone()));
    for (i, v) in table.iter().enumerate() {
        series.set_coeff(i as i64 + 1, prefactor.mul(v));
    }
    Ok(AsaiExpansion {
        series,
        trivial_constant_branch: trivial_branch,
    })
}

/// Packaged constants at a cusp for fixed character and weight: λ depends
/// only on the cusp, ε_n only on the cusp and n; both are eigenform-free.
#[derive(Clone, Debug)]
pub struct AsaiConstants {
    /// The cusp.
    pub label: CuspLabelX1,
    /// The global unit λ (prefactor with the ā_p factors removed).
    pub lambda: CycloElem,
    /// ε_n for n = 1..=prec with gcd(n, N) = 1; None at other n.
    pub eps: Vec<Option<CycloElem>>,
}

/// Compute the packaged constants for a character and weight.
pub fn asai_constants(
    chi: &DirichletChar,
    k: u64,
    label: &CuspLabelX1,
    prec: u64,
) -> Result<AsaiConstants> {
    let (lambda, _) = cusp_unit(chi, k, label)?;
    let m1 = label.m1 as i64;
    let m2 = label.m2() as i64;
    let (c, d) = bezout_cd(label.m1, label.m2());
    let n_level = label.n;
    let mut eps = Vec::with_capacity(prec as usize);
    for n in 1..=prec {
        if n.gcd(&n_level) != 1 {
            eps.push(None);
            continue;
        }
        let ni = n as i64;
        eps.push(Some(chi.value(d * ni * m2 + c * m1).conj().normalize()));
    }
    Ok(AsaiConstants {
        label: label.clone(),
        lambda,
        eps,
    })
}

/// A rational-coefficient linear combination of eigenform records sharing
/// level and weight.
#[derive(Clone, Debug)]
pub struct FormCombination {
    /// (coefficient, record) terms.
    pub terms: Vec<(Rat, EigenformRecord)>,
}

impl FormCombination {
    /// Validate shared level and weight; characters may differ (flagged
    /// downstream).
    pub fn new(terms: Vec<(Rat, EigenformRecord)>) -> Result<FormCombination> {
        if terms.is_empty() {
            return Err(Error::InvalidInput {
                context: "empty combination".into(),
            });
        }
        let (level, weight) = (terms[0].1.level, terms[0].1.weight);
        for (_, r) in &terms {
            if r.level != level || r.weight != weight {
                return Err(Error::InvalidInput {
                    context: "combination mixes levels or weights".into(),
                });
            }
            if r.field != terms[0].1.field {
                return Err(Error::FieldMismatch {
                    context: "combination terms use different coefficient fields".into(),
                });
            }
        }
        Ok(FormCombination { terms })
    }

    /// Shared level.
    pub fn level(&self) -> u64 {
        self.terms[0].1.level
    }

    /// True when all terms share one character.
    pub fn uniform_character(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, r)| r.character == self.terms[0].1.character)
    }

    /// Expansion at a cusp: the coefficientwise combination of the term
    /// expansions (identical Bézout choices throughout).
    pub fn expand(&self, label: &CuspLabelX1, prec: u64) -> Result<QSeries<TowerElem>> {
        let field = self.terms[0].1.field.clone();
        let mut acc = QSeries::new(label.m1, prec as i64 + 1, TowerElem::zero(field));
        for (coef, rec) in &self.terms {
            let e = asai_expand(rec, label, prec)?;
            acc = acc.add(&e.series.scale_by(&TowerElem::from_rat(
                rec.field.clone(),
                coef.clone(),
            )));
        }
        Ok(acc)
    }
}

/// Vanishing order report at one cusp.
#[derive(Clone, Debug)]
pub struct CuspOrder {
    /// The cusp.
    pub label: CuspLabelX1,
    /// Its width.
    pub width: u64,
    /// Valuation of the expansion in q^{1/M₁} units; the zero-to-precision
    /// flag marks exhausted precision rather than a proven zero.
    pub valuation: SeriesValuation,
}

/// Per-cusp vanishing orders of a combination.
#[derive(Clone, Debug)]
pub struct VanishingProfile {
    /// One entry per inspected cusp (one per width when orders are
    /// width-constant).
    pub entries: Vec<CuspOrder>,
    /// Caveats (mixed characters, zero-to-precision coefficients).
    pub warnings: Vec<String>,
}

/// Compute vanishing orders: one representative per width for a uniform
/// trivial character (orders are width-constant there), per-cusp with a
/// warning otherwise.
pub fn vanishing_profile(
    comb: &FormCombination,
    prec: u64,
) -> Result<VanishingProfile> {
    let n = comb.level();
    let atlas = crate::cosets::cusp_atlas_x1(n)?;
    let width_constant =
        comb.uniform_character() && comb.terms[0].1.character.is_trivial();
    let labels: Vec<CuspLabelX1> = if width_constant {
        let mut seen = std::collections::HashSet::new();
        atlas
            .into_iter()
            .filter(|l| seen.insert(l.m1))
            .collect()
    } else {
        atlas
    };
    let mut warnings = Vec::new();
    if !comb.uniform_character() {
        warnings.push(
            "mixed characters: orders need not be width-constant, reporting every cusp".into(),
        );
    }
    let mut entries = Vec::new();
    for label in labels {
        let series = comb.expand(&label, prec)?;
        let valuation = series.valuation();
        if matches!(valuation, SeriesValuation::ZeroToPrecision(_)) {
            warnings.push(format!(
                "expansion at {} is zero to precision {prec}, order unproven",
                label.to_string_label()
            ));
        }
        entries.push(CuspOrder {
            width: label.width(),
            label,
            valuation,
        });
    }
    Ok(VanishingProfile { entries, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_to_string;

    fn records() -> Vec<EigenformRecord> {
        let json = include_str!("../tests/data/35_2_a_b.json");
        EigenformRecord::ingest_many(json).unwrap()
    }

    fn label(s: &str) -> CuspLabelX1 {
        CuspLabelX1::parse(s, 35).unwrap()
    }

    #[test]
    fn ingest_validates_records() {
        let recs = records();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert_eq!(r.level, 35);
            assert_eq!(r.weight, 2);
            assert!(r.character.is_trivial());
            assert_eq!(r.a(1).unwrap(), NumFieldElem::from_rat(r.field.clone(), rat(1)));
            // a_6 = a_2 a_3 (checked again explicitly).
            assert_eq!(r.a(6).unwrap(), r.a(2).unwrap().mul(&r.a(3).unwrap()));
        }
        // The two embeddings carry the two roots of the defining
        // quadratic: their a_2 values sum to -1 and multiply to -4.
        let (f1, f2) = (&recs[0], &recs[1]);
        let (x, y) = (f1.a(2).unwrap(), f2.a(2).unwrap());
        let fld = f1.field.clone();
        assert_eq!(x.add(&y), NumFieldElem::from_rat(fld.clone(), rat(-1)));
        assert_eq!(x.mul(&y), NumFieldElem::from_rat(fld.clone(), rat(-4)));
        // The declared involution is the identity: a totally real field.
        assert!(fld.conj_is_identity());
        assert_eq!(x.conj(), x);
    }

    #[test]
    fn ingest_rejects_bad_data() {
        let json = include_str!("../tests/data/35_2_a_b.json");
        // Breaking a_1 must fail.
        let broken = json.replacen("\"1\",\n    \"0\"", "\"2\",\n    \"0\"", 1);
        assert!(EigenformRecord::ingest_many(&broken).is_err());
    }

    #[test]
    fn infinity_expansion_is_identity() {
        let recs = records();
        let e = asai_expand(&recs[0], &label("1:1:1"), 12).unwrap();
        assert_eq!(e.series.denom(), 1);
        assert!(!e.trivial_constant_branch);
        for n in 1..=12u64 {
            let expect = tower_of(&recs[0].field, &recs[0].a(n).unwrap());
            assert_eq!(e.series.coeff(n as i64), expect);
        }
    }

    #[test]
    fn branch_overlap_consistency() {
        let recs = records();
        for l in ["5:1:1", "7:1:1", "35:1:1", "5:2:3", "7:1:4"] {
            // Any branch disagreement raises inside the table build.
            asai_coeff_table(&recs[0], &label(l), 40).unwrap();
        }
    }

    #[test]
    fn leading_coefficient_at_width_5() {
        // At c_{5,1,1} the first coefficient is λ·ε₁·ā₅·a₁ with a
        // cusp-only unit.
        let recs = records();
        let l = label("5:1:1");
        let e = asai_expand(&recs[0], &l, 6).unwrap();
        let consts = asai_constants(&recs[0].character, 2, &l, 6).unwrap();
        let unit = consts
            .lambda
            .mul(consts.eps[0].as_ref().unwrap());
        let expect = TowerElem::from_cyclo(recs[0].field.clone(), unit)
            .mul(&tower_of(&recs[0].field, &recs[0].a_conj(5).unwrap()));
        assert_eq!(e.series.coeff(1), expect);
        assert!(e.trivial_constant_branch);
    }

    #[test]
    fn constants_are_eigenform_independent() {
        // The ratio of expansions of the two embeddings at coprime n is
        // a_n vs its conjugate times the same packaged unit.
        let recs = records();
        let l = label("7:1:1");
        let e1 = asai_expand(&recs[0], &l, 10).unwrap();
        let e2 = asai_expand(&recs[1], &l, 10).unwrap();
        let consts = asai_constants(&recs[0].character, 2, &l, 10).unwrap();
        for n in [1u64, 2, 3, 4, 6, 8, 9] {
            let unit = consts.lambda.mul(consts.eps[n as usize - 1].as_ref().unwrap());
            for (rec, e) in [(&recs[0], &e1), (&recs[1], &e2)] {
                let expect = TowerElem::from_cyclo(rec.field.clone(), unit.clone())
                    .mul(&tower_of(&rec.field, &rec.a_conj(7).unwrap()))
                    .mul(&tower_of(&rec.field, &rec.a(n).unwrap()));
                assert_eq!(e.series.coeff(n as i64), expect);
            }
        }
    }

    #[test]
    fn difference_kills_first_coefficient_at_all_widths() {
        // a_{M1,1,1,1}(f2 - f1) = 0 for M1 in {5, 7, 35}; at infinity the
        // difference starts at the second coefficient.
        let recs = records();
        let comb = FormCombination::new(vec![
            (rat(1), recs[1].clone()),
            (rat(-1), recs[0].clone()),
        ])
        .unwrap();
        for l in ["5:1:1", "7:1:1", "35:1:1"] {
            let s = comb.expand(&label(l), 8).unwrap();
            assert!(FieldElem::is_zero(&s.coeff(1)), "nonzero first coefficient at {l}");
            assert_eq!(s.valuation(), SeriesValuation::Finite(2), "at {l}");
        }
        let s = comb.expand(&label("1:1:1"), 8).unwrap();
        assert_eq!(s.valuation(), SeriesValuation::Finite(2));
        // The leading difference at infinity is a_2(f2) - a_2(f1) != 0.
        let diff = recs[1].a(2).unwrap().sub(&recs[0].a(2).unwrap());
        assert!(!FieldElem::is_zero(&diff));
    }

    #[test]
    fn vanishing_profile_of_difference() {
        let recs = records();
        let comb = FormCombination::new(vec![
            (rat(1), recs[1].clone()),
            (rat(-1), recs[0].clone()),
        ])
        .unwrap();
        let profile = vanishing_profile(&comb, 8).unwrap();
        // Width-constant: one entry per width.
        assert_eq!(profile.entries.len(), 4);
        for e in &profile.entries {
            assert_eq!(e.valuation, SeriesValuation::Finite(2), "width {}", e.width);
        }
        assert!(profile.warnings.is_empty());
    }

    #[test]
    fn single_newform_has_order_one_at_infinity() {
        let recs = records();
        let comb = FormCombination::new(vec![(rat(1), recs[0].clone())]).unwrap();
        let s = comb.expand(&label("1:1:1"), 6).unwrap();
        assert_eq!(s.valuation(), SeriesValuation::Finite(1));
    }

    #[test]
    fn epsilon_equivalent_labels_differ_by_global_unit() {
        let recs = records();
        // (a, b) and (-a, -b) name the same cusp; expansions agree up to
        // one unit scalar, and orders match.
        let l1 = CuspLabelX1 { m1: 5, a: 2, b: 3, n: 35 };
        let l2 = CuspLabelX1 { m1: 5, a: 3, b: 4, n: 35 }; // (-2 mod 5, -3 mod 7)
        assert_eq!(l1.canonicalize(), l2.canonicalize());
        let e1 = asai_expand(&recs[0], &l1, 10).unwrap().series;
        let e2 = asai_expand(&recs[0], &l2, 10).unwrap().series;
        // Ratio of the first nonzero coefficients.
        let c1 = e1.coeff(1);
        let c2 = e2.coeff(1);
        let unit = c2.mul(&c1.inv().expect("leading coefficient is a unit"));
        for n in 1..=10i64 {
            assert_eq!(e2.coeff(n), e1.coeff(n).mul(&unit), "n = {n}");
        }
    }

    #[test]
    fn bezout_determinism() {
        let (c, d) = bezout_cd(5, 7);
        assert_eq!(c * 5 + d * 7, 1);
        assert_eq!((c, d), (3, -2));
        let (c, d) = bezout_cd(1, 35);
        assert_eq!(c * 1 + d * 35, 1);
        assert_eq!(c, 1);
        let (c, d) = bezout_cd(35, 1);
        assert_eq!((c, d), (0, 1));
        // Sanity for the formatter used by the CLI.
        assert_eq!(rat_to_string(&ratio(3, -2)), "-3/2");
    }
}
