//! Dimension formulas for modular forms, the Δ-trick rank computation for
//! the weight-one cusp space, the discriminant expansion, formal square
//! roots producing weight-one forms, and Brill-Noether specialty verdicts.
//!
//! Weight one is the exceptional case: its cusp dimension has no formula
//! and is only ever reported from ingested data or from the rank of a
//! leading-coefficient matrix in weight 13.

use crate::arith::{euler_phi, is_squarefree};
use crate::cosets::{cusps, genus, CosetTable};
use crate::error::{Error, Result};
use crate::exact::linalg::rank_generic;
use crate::exact::qseries::{QSeries, SeriesValuation};
use crate::exact::{rat, ratio, FieldElem, Rat};
use crate::sl2::GroupSpec;
use num_traits::{Signed, ToPrimitive};

/// Which dimension statement produced a [`DimReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimBranch {
    /// k ≥ 3: both spaces by the Riemann-Roch formulas.
    Formula,
    /// k = 2: dim M₂ by formula, dim S₂ = g.
    Genus,
    /// k = 1 with n > 2g−2: dim M₁ = n/2 and dim S₁ = 0 are forced.
    InequalityRegime,
    /// k = 1 with n ≤ 2g−2: only dim M₁ − dim S₁ = n/2 is known.
    RelationOnly,
}

/// Dimensions of M_k and S_k for a group, with the branch that applies.
#[derive(Clone, Debug)]
pub struct DimReport {
    /// The group.
    pub spec: GroupSpec,
    /// The weight.
    pub k: u64,
    /// Genus of the quotient curve.
    pub genus: u64,
    /// Number of cusps.
    pub cusps: u64,
    /// dim M_k, when determined.
    pub dim_m: Option<u64>,
    /// dim S_k, when determined. Never claimed by formula in weight one.
    pub dim_s: Option<u64>,
    /// dim M_k − dim S_k, known in every branch.
    pub difference: u64,
    /// The statement used.
    pub branch: DimBranch,
}

/// Evaluate a rational dimension expression, insisting on an integer ≥ 0.
fn integral(r: Rat, what: &str) -> Result<u64> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::Inconsistency {
            context: format!("{what} = {r} is not a nonnegative integer"),
        });
    }
    Ok(r.to_integer().to_u64().expect("dimension fits in u64"))
}

/// Dimensions of M_k and S_k from genus and cusp count.
///
/// For k ≥ 2, dim M_k = (k−1)(g−1) + nk/2; for k ≥ 3, dim S_k =
/// (k−1)(g−1) + n(k−2)/2, while dim S₂ = g. In weight one only the
/// relation dim M₁ − dim S₁ = n/2 holds in general; when n > 2g−2 it
/// pins dim M₁ = n/2 and dim S₁ = 0.
pub fn rr_dims(spec: &GroupSpec, k: u64) -> Result<DimReport> {
    if k == 0 {
        return Err(Error::InvalidInput {
            context: "weight must be at least 1".into(),
        });
    }
    let table = CosetTable::build(spec);
    let cusp_list = cusps(&table);
    let g = genus(&table, &cusp_list)?;
    let n = cusp_list.len() as u64;
    let (gr, nr, kr) = (rat(g as i64), rat(n as i64), rat(k as i64));
    let one = rat(1);
    let m_formula = (&kr - &one) * (&gr - &one) + &nr * &kr * ratio(1, 2);
    let report = |dim_m, dim_s, difference, branch| {
        Ok(DimReport {
            spec: spec.clone(),
            k,
            genus: g,
            cusps: n,
            dim_m,
            dim_s,
            difference,
            branch,
        })
    };
    match k {
        1 => {
            let half_n = integral(&nr * ratio(1, 2), "n/2")?;
            if n as i64 > 2 * g as i64 - 2 {
                report(Some(half_n), Some(0), half_n, DimBranch::InequalityRegime)
            } else {
                report(None, None, half_n, DimBranch::RelationOnly)
            }
        }
        2 => {
            let m = integral(m_formula, "dim M_2")?;
            report(Some(m), Some(g), m - g, DimBranch::Genus)
        }
        _ => {
            let s_formula = (&kr - &one) * (&gr - &one) + &nr * (&kr - rat(2)) * ratio(1, 2);
            let m = integral(m_formula, "dim M_k")?;
            let s = integral(s_formula, "dim S_k")?;
            if m - s != n {
                return Err(Error::Inconsistency {
                    context: format!("dim M_k − dim S_k = {} but there are {n} cusps", m - s),
                });
            }
            report(Some(m), Some(s), n, DimBranch::Formula)
        }
    }
}

/// Necessary bound for a weight-one form vanishing to order ≥ 1 at every
/// cusp: 24n ≤ [SL₂(Z) : Γ]. For principal levels it holds iff N ≥ 12.
pub fn weight1_existence_bound(spec: &GroupSpec) -> bool {
    let table = CosetTable::build(spec);
    let n = cusps(&table).len();
    24 * n <= table.sl2_index()
}

/// Degree of the modular line bundle ω: g − 1 + n/2, exactly.
pub fn omega_degree(genus: u64, n_cusps: u64) -> Result<i64> {
    let d = rat(genus as i64) - rat(1) + rat(n_cusps as i64) * ratio(1, 2);
    if !d.is_integer() {
        return Err(Error::Inconsistency {
            context: format!("deg ω = {d} is not an integer"),
        });
    }
    Ok(d.to_integer().to_i64().expect("degree fits in i64"))
}

/// Degree of ω(−D) for D the cuspidal divisor: g − 1 − n/2, exactly.
pub fn omega_minus_d_degree(genus: u64, n_cusps: u64) -> Result<i64> {
    let d = rat(genus as i64) - rat(1) - rat(n_cusps as i64) * ratio(1, 2);
    if !d.is_integer() {
        return Err(Error::Inconsistency {
            context: format!("deg ω(−D) = {d} is not an integer"),
        });
    }
    Ok(d.to_integer().to_i64().expect("degree fits in i64"))
}

/// A degree-zero ω(−D) with a nonzero section is trivial; the section is
/// a weight-one cusp-vanishing form, so dim S₁ ≥ 1 certifies triviality.
pub fn theta_bundle_trivial(genus: u64, n_cusps: u64, dim_s1: u64) -> Result<bool> {
    Ok(omega_minus_d_degree(genus, n_cusps)? == 0 && dim_s1 >= 1)
}

/// The discriminant q∏(1−qⁿ)²⁴, expanded to the given precision
/// (exclusive, in integer exponents).
pub fn delta_expansion(prec: i64) -> QSeries<Rat> {
    assert!(prec >= 2);
    // Euler product via the pentagonal number theorem, then 24th power.
    let mut euler = QSeries::new(1, prec, rat(0));
    let mut k = 0i64;
    loop {
        let mut hit = false;
        for s in [k, -k] {
            let e = s * (3 * s - 1) / 2;
            if e < prec {
                hit = true;
                let sign = if s.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                euler.set_coeff(e, euler.coeff(e).add(&sign));
            }
            if s == 0 {
                break;
            }
        }
        if !hit {
            break;
        }
        k += 1;
    }
    let e2 = euler.mul(&euler);
    let e4 = e2.mul(&e2);
    let e8 = e4.mul(&e4);
    let e16 = e8.mul(&e8);
    let e24 = e16.mul(&e8);
    let mut q = QSeries::new(1, prec, rat(0));
    q.set_coeff(1, rat(1));
    q.mul(&e24)
}

/// The discriminant as a series in q^{1/width} at a cusp of the given
/// width; level-1 invariance makes the expansion the same in q, so the
/// j-order there is exactly the width.
pub fn delta_at_width(width: u64, prec: i64) -> QSeries<Rat> {
    delta_expansion(prec).lift_denom(width)
}

/// The matrix of first Fourier coefficients: one row per cusp, one column
/// per basis form of the weight-13 cusp space.
#[derive(Clone, Debug)]
pub struct LeadingMatrix<T: FieldElem> {
    rows: Vec<Vec<T>>,
}

impl<T: FieldElem> LeadingMatrix<T> {
    /// Validate rectangularity.
    pub fn new(rows: Vec<Vec<T>>) -> Result<LeadingMatrix<T>> {
        if let Some(first) = rows.first() {
            let w = first.len();
            if rows.iter().any(|r| r.len() != w) {
                return Err(Error::InvalidInput {
                    context: "leading-coefficient matrix rows have unequal lengths".into(),
                });
            }
        }
        Ok(LeadingMatrix { rows })
    }

    /// The rows.
    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_generic(&self.rows)
    }
}

/// dim S₁ = dim S₁₃ − rank M, the Δ-trick: multiplication by Δ carries
/// S₁ onto the weight-13 cusp forms vanishing to order ≥ 2 at every cusp,
/// the kernel of the leading-coefficient matrix.
pub fn dim_s1_via_rank<T: FieldElem>(m: &LeadingMatrix<T>, dim_s13: u64) -> Result<u64> {
    let r = m.rank() as u64;
    if r > dim_s13 {
        return Err(Error::Inconsistency {
            context: format!("rank {r} exceeds dim S₁₃ = {dim_s13}"),
        });
    }
    Ok(dim_s13 - r)
}

/// Outcome of extracting a weight-one form as a formal square root.
#[derive(Clone, Debug)]
pub struct Weight1Sqrt<T: FieldElem> {
    /// Leading coefficient c of the input at ∞.
    pub leading: T,
    /// Monic series h with c·h² equal to the input, leading term q.
    pub monic: QSeries<T>,
    /// The full square root, when c is a square in the coefficient field.
    pub root: Option<QSeries<T>>,
    /// True when the root lives in the quadratic extension by √c.
    pub needs_extension: bool,
    /// The extracted form trivializes ν(−D) for its theta level ν.
    pub bundle_trivial: bool,
}

/// Extract a weight-one form as the formal square root of a weight-two
/// form vanishing to order ≥ 2 at every cusp.
///
/// Requires deg Ω¹(−D) = 2g − 2 − n = 0, so that the square root of the
/// section of Ω¹(−2D)·O(stuff) has a genuine theta bundle; each supplied
/// cusp valuation must be even and ≥ 2 in that cusp's own j-units.
pub fn weight1_sqrt_extract<T: FieldElem>(
    at_infinity: &QSeries<T>,
    cusp_valuations: &[SeriesValuation],
    genus: u64,
    n_cusps: u64,
) -> Result<Weight1Sqrt<T>> {
    if 2 * genus as i64 - 2 != n_cusps as i64 {
        return Err(Error::InvalidInput {
            context: format!(
                "degree condition fails: 2g−2 = {} but there are {n_cusps} cusps",
                2 * genus as i64 - 2
            ),
        });
    }
    for v in cusp_valuations.iter().chain([&at_infinity.valuation()]) {
        match *v {
            SeriesValuation::Finite(j) => {
                if j < 2 {
                    return Err(Error::InvalidInput {
                        context: format!("cusp vanishing order {j} is below 2"),
                    });
                }
                if j % 2 != 0 {
                    return Err(Error::Series {
                        context: format!("odd cusp valuation {j}, no square root"),
                    });
                }
            }
            SeriesValuation::ZeroToPrecision(p) => {
                // A truncation artifact; the order bound still holds.
                if p < 2 {
                    return Err(Error::InvalidInput {
                        context: "precision too low to certify vanishing order 2".into(),
                    });
                }
            }
        }
    }
    let (leading, monic) = at_infinity.sqrt_monic()?;
    let (root, needs_extension) = match at_infinity.sqrt(None) {
        Ok(r) => (Some(r), false),
        Err(Error::SqrtNeedsExtension) => (None, true),
        Err(e) => return Err(e),
    };
    Ok(Weight1Sqrt {
        leading,
        monic,
        root,
        needs_extension,
        bundle_trivial: true,
    })
}

/// The Brill-Noether number ρ(g,d,r) = g − (r+1)(g−d+r).
pub fn bn_rho(g: i64, d: i64, r: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// Which criterion certified Brill-Noether specialty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BnCriterion {
    /// dim S₁ ≥ 2 (ingested datum), with a Petri-kernel witness.
    IngestedS1,
    /// Γ₁(N) with N squarefree, N > 10 and 4 | φ(N).
    Gamma1Shape,
    /// Inherited through a verified supergroup that satisfies a criterion.
    Supergroup,
}

/// Specialty verdict; `special = false` means no criterion triggered, not
/// a proof of generality.
#[derive(Clone, Debug)]
pub struct BnVerdict {
    /// True when some criterion triggered.
    pub special: bool,
    /// The first criterion that applied.
    pub criterion: Option<BnCriterion>,
    /// Human-readable witness description.
    pub witness: Option<String>,
}

/// True when every element of the inner group lies in the outer group,
/// read off the defining congruence conditions.
pub fn spec_contains(outer: &GroupSpec, inner: &GroupSpec) -> bool {
    // Inner members satisfy a ≡ d ≡ 1, c ≡ 0 mod lcm(N₁,N₂) and b ≡ 0
    // mod N₂; the outer conditions follow exactly under divisibility.
    inner.n() % outer.n() == 0 && inner.n2() % outer.n2() == 0
}

/// Brill-Noether specialty of the modular curve, by the first criterion
/// that applies: ingested dim S₁ ≥ 2, the Γ₁(N) shape test, or
/// inheritance through a supplied chain of supergroups.
pub fn bn_special_verdict(
    spec: &GroupSpec,
    dim_s1: Option<u64>,
    supergroups: &[GroupSpec],
) -> Result<BnVerdict> {
    if let Some(d) = dim_s1 {
        if d >= 2 {
            return Ok(BnVerdict {
                special: true,
                criterion: Some(BnCriterion::IngestedS1),
                witness: Some(
                    "two independent weight-one sections s, s′ give the \
                     antisymmetric Petri-kernel element s⊗s′ − s′⊗s; the \
                     residual divisor class is effective since K − 2ν(−D) \
                     is cuspidal"
                        .into(),
                ),
            });
        }
    }
    if gamma1_shape_special(spec) {
        return Ok(BnVerdict {
            special: true,
            criterion: Some(BnCriterion::Gamma1Shape),
            witness: Some(format!(
                "Γ₁({0}) with {0} squarefree, {0} > 10 and 4 | φ({0}) = {1}",
                spec.n1(),
                euler_phi(spec.n1())
            )),
        });
    }
    for sup in supergroups {
        if !spec_contains(sup, spec) {
            return Err(Error::InvalidInput {
                context: format!(
                    "({}, {}) is not a supergroup of ({}, {})",
                    sup.n1(),
                    sup.n2(),
                    spec.n1(),
                    spec.n2()
                ),
            });
        }
        if gamma1_shape_special(sup) {
            return Ok(BnVerdict {
                special: true,
                criterion: Some(BnCriterion::Supergroup),
                witness: Some(format!(
                    "covers the special curve of Γ₁({}); specialty pulls \
                     back along the covering",
                    sup.n1()
                )),
            });
        }
    }
    Ok(BnVerdict {
        special: false,
        criterion: None,
        witness: None,
    })
}

fn gamma1_shape_special(spec: &GroupSpec) -> bool {
    spec.n2() == 1
        && is_squarefree(spec.n1())
        && spec.n1() > 10
        && euler_phi(spec.n1()) % 4 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asai::{vanishing_profile, EigenformRecord, FormCombination};
    use crate::cosets::CuspLabelX1;

    #[test]
    fn weight_13_dimension_for_gamma1_35() {
        let spec = GroupSpec::gamma1(35).unwrap();
        let r = rr_dims(&spec, 13).unwrap();
        assert_eq!(r.genus, 25);
        assert_eq!(r.cusps, 48);
        assert_eq!(r.dim_s, Some(552));
        assert_eq!(r.dim_m, Some(600));
        assert_eq!(r.branch, DimBranch::Formula);
    }

    #[test]
    fn weight_two_cusp_dimension_is_genus() {
        let spec = GroupSpec::gamma1(23).unwrap();
        let r = rr_dims(&spec, 2).unwrap();
        assert_eq!(r.genus, 12);
        assert_eq!(r.dim_s, Some(12));
        assert_eq!(r.branch, DimBranch::Genus);
    }

    #[test]
    fn weight_one_inequality_regime() {
        // Γ₁(5): n = 4 > 2g−2 = −2.
        let spec = GroupSpec::gamma1(5).unwrap();
        let r = rr_dims(&spec, 1).unwrap();
        assert_eq!(r.genus, 0);
        assert_eq!(r.cusps, 4);
        assert_eq!(r.dim_m, Some(2));
        assert_eq!(r.dim_s, Some(0));
        assert_eq!(r.branch, DimBranch::InequalityRegime);
    }

    #[test]
    fn weight_one_relation_only_regime() {
        // Γ₁(23): n = 22 ≤ 2g−2 = 22.
        let spec = GroupSpec::gamma1(23).unwrap();
        let r = rr_dims(&spec, 1).unwrap();
        assert_eq!(r.dim_m, None);
        assert_eq!(r.dim_s, None);
        assert_eq!(r.difference, 11);
        assert_eq!(r.branch, DimBranch::RelationOnly);
    }

    #[test]
    fn dimension_difference_is_cusp_count() {
        for (n1, n2) in [(5, 1), (7, 1), (11, 1), (13, 1), (1, 5), (5, 3)] {
            let spec = GroupSpec::new(n1, n2).unwrap();
            for k in 3..=8 {
                let r = rr_dims(&spec, k).unwrap();
                assert_eq!(r.dim_m.unwrap() - r.dim_s.unwrap(), r.cusps);
            }
        }
    }

    #[test]
    fn existence_bound_cases() {
        assert!(weight1_existence_bound(&GroupSpec::new(1, 12).unwrap()));
        assert!(weight1_existence_bound(&GroupSpec::gamma1(23).unwrap()));
        assert!(!weight1_existence_bound(&GroupSpec::gamma1(5).unwrap()));
    }

    #[test]
    fn discriminant_coefficients() {
        let d = delta_expansion(12);
        let tau = |n: i64| d.coeff(n);
        assert_eq!(tau(1), rat(1));
        assert_eq!(tau(2), rat(-24));
        assert_eq!(tau(3), rat(252));
        assert_eq!(tau(4), rat(-1472));
        assert_eq!(tau(6), tau(2) * tau(3));
        for (_, c) in d.terms() {
            assert!(c.is_integer());
        }
    }

    #[test]
    fn discriminant_order_at_wide_cusp() {
        let d = delta_at_width(5, 4);
        assert_eq!(d.denom(), 5);
        assert_eq!(d.valuation(), SeriesValuation::Finite(5));
    }

    #[test]
    fn rank_trick_dimension_drops() {
        let zero = LeadingMatrix::new(vec![vec![rat(0); 3]; 2]).unwrap();
        assert_eq!(dim_s1_via_rank(&zero, 552).unwrap(), 552);
        let dependent = LeadingMatrix::new(vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
        ])
        .unwrap();
        assert_eq!(dependent.rank(), 1);
        assert_eq!(dim_s1_via_rank(&dependent, 5).unwrap(), 4);
        let full = LeadingMatrix::new(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        assert!(dim_s1_via_rank(&full, 1).is_err());
    }

    #[test]
    fn degree_bookkeeping() {
        // X₁(35): deg ω(−D) = 25 − 1 − 24 = 0; X₁(23): 12 − 1 − 11 = 0.
        assert_eq!(omega_degree(25, 48).unwrap(), 48);
        assert_eq!(omega_minus_d_degree(25, 48).unwrap(), 0);
        assert_eq!(omega_minus_d_degree(12, 22).unwrap(), 0);
        assert!(theta_bundle_trivial(12, 22, 1).unwrap());
        assert!(!theta_bundle_trivial(12, 22, 0).unwrap());
    }

    #[test]
    fn sqrt_extraction_from_difference_of_embeddings() {
        let recs = EigenformRecord::ingest_many(include_str!("../tests/data/35_2_a_b.json"))
            .unwrap();
        let comb = FormCombination::new(vec![
            (rat(1), recs[1].clone()),
            (rat(-1), recs[0].clone()),
        ])
        .unwrap();
        let inf = comb
            .expand(&CuspLabelX1::parse("1:1:1", 35).unwrap(), 20)
            .unwrap();
        let profile = vanishing_profile(&comb, 8).unwrap();
        let vals: Vec<_> = profile.entries.iter().map(|e| e.valuation).collect();
        let out = weight1_sqrt_extract(&inf, &vals, 25, 48).unwrap();
        // Leading coefficient is a square root of 17 in Q(√17): no square
        // root inside the field, so only the monic part is rational there.
        assert!(out.needs_extension);
        assert!(out.root.is_none());
        assert!(out.bundle_trivial);
        let sq = out.monic.mul(&out.monic).scale_by(&out.leading);
        assert_eq!(sq, inf.truncate(sq.prec()));
        assert_eq!(out.monic.coeff(1), out.leading.one_like());
        let seventeen = out.leading.one_like().scale(&rat(17));
        assert_eq!(out.leading.mul(&out.leading), seventeen);
    }

    #[test]
    fn sqrt_extraction_guards() {
        let mut s = QSeries::new(1, 8, rat(0));
        s.set_coeff(2, rat(4));
        // Degree condition: 2g−2 must equal n.
        assert!(weight1_sqrt_extract(&s, &[], 25, 40).is_err());
        let ok = weight1_sqrt_extract(&s, &[SeriesValuation::Finite(2)], 25, 48).unwrap();
        assert!(!ok.needs_extension);
        assert_eq!(ok.root.unwrap().coeff(1), rat(2));
        // Odd valuation anywhere is fatal.
        assert!(
            weight1_sqrt_extract(&s, &[SeriesValuation::Finite(3)], 25, 48).is_err()
        );
        let mut odd = QSeries::new(1, 8, rat(0));
        odd.set_coeff(3, rat(1));
        assert!(weight1_sqrt_extract(&odd, &[], 25, 48).is_err());
    }

    #[test]
    fn brill_noether_numbers() {
        assert_eq!(bn_rho(12, 11, 1), 8);
        assert_eq!(bn_rho(7, 7, 0), 7);
        assert_eq!(bn_rho(2, 1, 1), -2);
    }

    #[test]
    fn specialty_criteria() {
        let g13 = GroupSpec::gamma1(13).unwrap();
        let v = bn_special_verdict(&g13, None, &[]).unwrap();
        assert!(v.special);
        assert_eq!(v.criterion, Some(BnCriterion::Gamma1Shape));

        // φ(11) = 10 is not divisible by 4; inconclusive without data.
        let g11 = GroupSpec::gamma1(11).unwrap();
        let v = bn_special_verdict(&g11, None, &[]).unwrap();
        assert!(!v.special);

        let v = bn_special_verdict(&g11, Some(2), &[]).unwrap();
        assert!(v.special);
        assert_eq!(v.criterion, Some(BnCriterion::IngestedS1));
        assert!(v.witness.unwrap().contains("Petri"));

        // Γ₁(13) ∩ Γ(2) covers X₁(13); specialty is inherited.
        let sub = GroupSpec::new(13, 2).unwrap();
        assert!(spec_contains(&g13, &sub));
        let v = bn_special_verdict(&sub, None, &[g13.clone()]).unwrap();
        assert!(v.special);
        assert_eq!(v.criterion, Some(BnCriterion::Supergroup));

        // A claimed supergroup that is not one is rejected.
        let g5 = GroupSpec::gamma1(5).unwrap();
        let g7 = GroupSpec::gamma1(7).unwrap();
        assert!(bn_special_verdict(&g5, None, &[g7]).is_err());
    }
}
