//! Command implementations: each returns the full stdout text, so runs
//! are deterministic and directly comparable byte-for-byte.

use crate::cache::Cache;
use crate::failure::Failure;
use crate::render;
use modcurve::asai::{vanishing_profile, EigenformRecord, FormCombination};
use modcurve::congruence::{is_congruence_lift, principal_generators, shear_span_check};
use modcurve::cosets::{cusps, genus, CuspLabelX1};
use modcurve::exact::{parse_rat, rat_to_string, Rat};
use modcurve::presentation::FreePresentation;
use modcurve::sl2::GroupSpec;
use modcurve::sp4::{
    gamma_plus_member, sp4_level_member, sp4_member, structure_equiv, twisted_swap_invariance,
    LevelStructure, PlusKind, Sp4Mat,
};
use modcurve::weight1::{
    bn_special_verdict, dim_s1_via_rank, omega_minus_d_degree, rr_dims, spec_contains,
    theta_bundle_trivial, weight1_existence_bound, weight1_sqrt_extract, DimBranch, LeadingMatrix,
};
use num_bigint::BigUint;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt::Write as _;

type Out = Result<String, Failure>;

/// `curve info`: invariants of the quotient curve.
pub fn curve_info(spec: &GroupSpec, cache: &Cache) -> Out {
    let table = cache.table(spec);
    let cusp_list = cusps(&table);
    let g = genus(&table, &cusp_list)?;
    let mut widths: BTreeMap<u64, usize> = BTreeMap::new();
    for c in &cusp_list {
        *widths.entry(c.width).or_default() += 1;
    }
    let widths: BTreeMap<String, usize> =
        widths.into_iter().map(|(w, k)| (w.to_string(), k)).collect();
    let v = json!({
        "n1": spec.n1(),
        "n2": spec.n2(),
        "psl_index": table.size(),
        "sl2_index": table.sl2_index(),
        "genus": g,
        "cusps": cusp_list.len(),
        "general_level": modcurve::congruence::general_level(&cusp_list),
        "widths": widths,
        "weight1_bound": weight1_existence_bound(spec),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

/// `cusps`: TSV of representative, width, orbit size.
pub fn cusps_tsv(spec: &GroupSpec, cache: &Cache) -> Out {
    let table = cache.table(spec);
    let mut out = String::from("representative\twidth\torbit\n");
    for c in cusps(&table) {
        let rep = if c.is_infinity() {
            "inf".to_string()
        } else {
            format!("{}/{}", c.representative.0, c.representative.1)
        };
        writeln!(out, "{rep}\t{}\t{}", c.width, c.orbit.len()).unwrap();
    }
    Ok(out)
}

fn presentation_of(spec: &GroupSpec, cache: &Cache) -> Result<FreePresentation, Failure> {
    Ok(FreePresentation::build(cache.table(spec))?)
}

/// `theta count`: dimension and cardinality of the character space.
pub fn theta_count(spec: &GroupSpec, cache: &Cache) -> Out {
    let pres = presentation_of(spec, cache)?;
    let chars = pres.theta_characters()?;
    let v = json!({
        "genus": pres.genus(),
        "dim": chars.dim(),
        "count": chars.count().to_string(),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

/// `theta list`: serialized characters, one per line, up to a limit.
pub fn theta_list(spec: &GroupSpec, limit: usize, cache: &Cache) -> Out {
    let pres = presentation_of(spec, cache)?;
    let chars = pres.theta_characters()?;
    let mut out = format!(
        "# spec n1={} n2={}\n# dim={} count={}\n",
        spec.n1(),
        spec.n2(),
        chars.dim(),
        chars.count()
    );
    let mut i = BigUint::from(0u32);
    let one = BigUint::from(1u32);
    let mut printed = 0usize;
    while printed < limit {
        let Some(chi) = chars.get(&i) else { break };
        writeln!(out, "{printed}\t{}", chi.serialize()).unwrap();
        i += &one;
        printed += 1;
    }
    if BigUint::from(printed) < chars.count() {
        writeln!(out, "# truncated at {printed} of {}", chars.count()).unwrap();
    }
    Ok(out)
}

/// Character selection for `theta congruence`.
pub enum CharSelection {
    /// All 2^{2g} characters (guarded by a hard limit).
    All,
    /// Deterministic sample of the given size and seed.
    Sample { count: usize, seed: u64 },
}

/// `theta congruence`: per-character verdicts by both methods.
pub fn theta_congruence(
    spec: &GroupSpec,
    selection: CharSelection,
    cap: usize,
    cache: &Cache,
) -> Out {
    let pres = presentation_of(spec, cache)?;
    let chars = pres.theta_characters()?;
    let principal = principal_generators(spec, &pres)?;
    let span = shear_span_check(spec, &pres, cap)?;
    let mut out = format!(
        "# spec n1={} n2={}\n# characters dim={} count={}\n# span quotient_order={} v2_dim={} shear_rank={} spans={}\n",
        spec.n1(),
        spec.n2(),
        chars.dim(),
        chars.count(),
        span.quotient_order,
        span.v2_dim,
        span.shear_rank,
        span.spans,
    );
    out.push_str("character\tdirect\tspan\tagree\n");
    let emit = |out: &mut String, chi: &modcurve::presentation::ThetaCharacter| {
        let direct = is_congruence_lift(chi, &pres, &principal);
        let d = if direct.is_congruence { "congruence" } else { "noncongruence" };
        let s = if chi.is_omega() {
            "congruence"
        } else if span.spans {
            "noncongruence"
        } else {
            "undecided"
        };
        let agree = if s == "undecided" { "-" } else if s == d { "yes" } else { "no" };
        writeln!(out, "{}\t{d}\t{s}\t{agree}", chi.serialize()).unwrap();
    };
    match selection {
        CharSelection::All => {
            const HARD_LIMIT: u64 = 1 << 20;
            if chars.count() > BigUint::from(HARD_LIMIT) {
                return Err(Failure::usage(format!(
                    "{} characters exceed the streaming limit {HARD_LIMIT}; use --sample",
                    chars.count()
                )));
            }
            let mut i = BigUint::from(0u32);
            let one = BigUint::from(1u32);
            while let Some(chi) = chars.get(&i) {
                emit(&mut out, &chi);
                i += &one;
            }
        }
        CharSelection::Sample { count, seed } => {
            use rand::SeedableRng;
            writeln!(out, "# seed {seed}").unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            emit(&mut out, &modcurve::presentation::ThetaCharacter::omega(&pres));
            for _ in 0..count {
                emit(&mut out, &chars.sample(&mut rng));
            }
        }
    }
    Ok(out)
}

fn load_records(path: &str) -> Result<Vec<EigenformRecord>, Failure> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {path}: {e}")))?;
    let records = if body.trim_start().starts_with('[') {
        EigenformRecord::ingest_many(&body)?
    } else {
        vec![EigenformRecord::ingest(&body)?]
    };
    Ok(records)
}

fn combination(path: &str, coeffs: Option<&str>) -> Result<FormCombination, Failure> {
    let records = load_records(path)?;
    let weights: Vec<Rat> = match coeffs {
        None => vec![parse_rat("1").unwrap()],
        Some(s) => s
            .split(',')
            .map(|t| {
                parse_rat(t).ok_or_else(|| Failure::usage(format!("bad coefficient '{t}'")))
            })
            .collect::<Result<_, _>>()?,
    };
    if weights.len() > records.len() {
        return Err(Failure::usage(format!(
            "{} coefficients for {} records",
            weights.len(),
            records.len()
        )));
    }
    let terms = weights
        .into_iter()
        .zip(records.iter().cloned())
        .collect::<Vec<_>>();
    Ok(FormCombination::new(terms)?)
}

/// `expand`: q-expansion of a combination at a cusp; TSV or JSON.
pub fn expand(
    form: &str,
    cusp: &str,
    prec: Option<i64>,
    coeffs: Option<&str>,
    as_json: bool,
) -> Out {
    let comb = combination(form, coeffs)?;
    let label = CuspLabelX1::parse(cusp, comb.level())?;
    // Default precision: j < 4·M₁, enough for order-2 checks with margin,
    // capped by the stored coefficient count of the ingested records.
    let stored = comb
        .terms
        .iter()
        .map(|(_, r)| r.prec() as i64)
        .min()
        .unwrap_or(1);
    let prec = prec.unwrap_or((4 * label.m1 as i64 - 1).min(stored));
    if prec < 1 {
        return Err(Failure::usage("precision must be at least 1".into()));
    }
    let series = comb.expand(&label, prec as u64)?;
    if as_json {
        let field = comb.terms[0].1.field.clone();
        let coeffs: BTreeMap<String, serde_json::Value> = series
            .terms()
            .map(|(j, c)| (j.to_string(), render::tower_json(c)))
            .collect();
        let v = json!({
            "denom": series.denom(),
            "prec": series.prec(),
            "field": {
                "poly": field.poly().iter().map(rat_to_string).collect::<Vec<_>>(),
                "conj": field.conj_gen().iter().map(rat_to_string).collect::<Vec<_>>(),
            },
            "coeffs": coeffs,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&v)?));
    }
    let mut out = format!(
        "# cusp {} denom {} prec {}\nj\tcoefficient\n",
        label.to_string_label(),
        series.denom(),
        series.prec()
    );
    for (j, c) in series.terms() {
        writeln!(out, "{j}\t{}", render::tower_compact(c)).unwrap();
    }
    Ok(out)
}

/// `vanishing`: per-cusp (or per-width) vanishing orders.
pub fn vanishing(form: &str, prec: u64, coeffs: Option<&str>) -> Out {
    let comb = combination(form, coeffs)?;
    let profile = vanishing_profile(&comb, prec)?;
    let mut out = String::new();
    for w in &profile.warnings {
        writeln!(out, "# warning: {w}").unwrap();
    }
    out.push_str("cusp\twidth\torder\n");
    for e in &profile.entries {
        writeln!(
            out,
            "{}\t{}\t{}",
            e.label.to_string_label(),
            e.width,
            render::valuation(&e.valuation)
        )
        .unwrap();
    }
    Ok(out)
}

/// `weight1 dim`: dimension report, optionally with the rank trick.
pub fn weight1_dim(
    spec: &GroupSpec,
    k: u64,
    s13_matrix: Option<&str>,
    dim_s13: Option<u64>,
) -> Out {
    let report = rr_dims(spec, k)?;
    let branch = match report.branch {
        DimBranch::Formula => "formula",
        DimBranch::Genus => "genus",
        DimBranch::InequalityRegime => "inequality-regime",
        DimBranch::RelationOnly => "relation-only",
    };
    let mut v = json!({
        "n1": spec.n1(),
        "n2": spec.n2(),
        "k": k,
        "genus": report.genus,
        "cusps": report.cusps,
        "dim_m": report.dim_m,
        "dim_s": report.dim_s,
        "difference": report.difference,
        "branch": branch,
    });
    if let Some(path) = s13_matrix {
        let d13 = dim_s13.ok_or_else(|| Failure::usage("--s13-matrix needs --dim-s13".into()))?;
        let body = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("cannot read {path}: {e}")))?;
        let raw: Vec<Vec<String>> = serde_json::from_str(&body)?;
        let rows = raw
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        parse_rat(s).ok_or_else(|| Failure::usage(format!("bad entry '{s}'")))
                    })
                    .collect::<Result<Vec<Rat>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = LeadingMatrix::new(rows)?;
        let obj = v.as_object_mut().unwrap();
        obj.insert("rank".into(), json!(m.rank()));
        obj.insert("dim_s13".into(), json!(d13));
        obj.insert("dim_s1".into(), json!(dim_s1_via_rank(&m, d13)?));
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

/// `weight1 delta`: discriminant coefficients, disk-cached by precision.
pub fn weight1_delta(prec: i64, cache: &Cache) -> Out {
    if prec < 2 {
        return Err(Failure::usage("precision must be at least 2".into()));
    }
    let d = cache.delta(prec);
    let mut out = String::from("n\ttau\n");
    for n in 1..prec {
        writeln!(out, "{n}\t{}", rat_to_string(&d.coeff(n))).unwrap();
    }
    Ok(out)
}

/// `sqrt`: formal weight-one square root of a weight-two combination.
pub fn sqrt(form: &str, coeffs: Option<&str>, prec: Option<i64>, cache: &Cache) -> Out {
    let comb = combination(form, coeffs)?;
    let level = comb.level();
    let spec = GroupSpec::gamma1(level)?;
    let table = cache.table(&spec);
    let cusp_list = cusps(&table);
    let g = genus(&table, &cusp_list)?;
    let n = cusp_list.len() as u64;
    let inf = CuspLabelX1::parse("1:1:1", level)?;
    let prec = prec.unwrap_or(20);
    let series = comb.expand(&inf, prec as u64)?;
    let profile = vanishing_profile(&comb, 8)?;
    let vals: Vec<_> = profile.entries.iter().map(|e| e.valuation).collect();
    let out = weight1_sqrt_extract(&series, &vals, g, n)?;
    let mut text = format!(
        "# genus {g} cusps {n} omega_minus_d_degree {}\n# needs_extension {}\n# bundle_trivial {}\n# leading {}\n",
        omega_minus_d_degree(g, n)?,
        out.needs_extension,
        out.bundle_trivial,
        render::tower_compact(&out.leading),
    );
    let (series, tag) = match &out.root {
        Some(r) => (r, "root"),
        None => (&out.monic, "monic"),
    };
    writeln!(text, "# series {tag}\nj\tcoefficient").unwrap();
    for (j, c) in series.terms() {
        writeln!(text, "{j}\t{}", render::tower_compact(c)).unwrap();
    }
    Ok(text)
}

/// `bn check`: Brill-Noether specialty verdict.
pub fn bn_check(spec: &GroupSpec, dim_s1: Option<u64>, supergroups: &[String]) -> Out {
    let sups = supergroups
        .iter()
        .map(|s| parse_spec_pair(s))
        .collect::<Result<Vec<_>, _>>()?;
    for sup in &sups {
        if !spec_contains(sup, spec) {
            return Err(Failure::usage(format!(
                "({}, {}) is not a supergroup of ({}, {})",
                sup.n1(),
                sup.n2(),
                spec.n1(),
                spec.n2()
            )));
        }
    }
    let verdict = bn_special_verdict(spec, dim_s1, &sups)?;
    let criterion = verdict.criterion.as_ref().map(|c| match c {
        modcurve::weight1::BnCriterion::IngestedS1 => "ingested-s1",
        modcurve::weight1::BnCriterion::Gamma1Shape => "gamma1-shape",
        modcurve::weight1::BnCriterion::Supergroup => "supergroup",
    });
    let mut v = json!({
        "n1": spec.n1(),
        "n2": spec.n2(),
        "special": verdict.special,
        "criterion": criterion,
        "witness": verdict.witness,
    });
    // The theta-bundle side report backing the dim-S₁ = 1 verdict.
    if let Some(d) = dim_s1 {
        let table = modcurve::cosets::CosetTable::build(spec);
        let cusp_list = cusps(&table);
        let g = genus(&table, &cusp_list)?;
        let n = cusp_list.len() as u64;
        let deg = omega_minus_d_degree(g, n)?;
        let obj = v.as_object_mut().unwrap();
        obj.insert("omega_minus_d_degree".into(), json!(deg));
        obj.insert(
            "omega_minus_d_trivial".into(),
            json!(theta_bundle_trivial(g, n, d)?),
        );
        if deg == 0 && d == 1 {
            obj.insert(
                "verdict".into(),
                json!("omega(-D) is trivial; every theta characteristic other than omega has no cusp-vanishing weight-one section"),
            );
        }
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

fn parse_spec_pair(s: &str) -> Result<GroupSpec, Failure> {
    let (a, b) = match s.split_once(',') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let n1 = a.parse::<u64>().map_err(|_| Failure::usage(format!("bad level '{s}'")))?;
    let n2 = b.parse::<u64>().map_err(|_| Failure::usage(format!("bad level '{s}'")))?;
    Ok(GroupSpec::new(n1, n2)?)
}

fn parse_kind(kind: &str) -> Result<PlusKind, Failure> {
    match kind {
        "gamma" => Ok(PlusKind::Gamma),
        "gamma1" => Ok(PlusKind::Gamma1),
        _ => Err(Failure::usage(format!("kind must be gamma or gamma1, got '{kind}'"))),
    }
}

/// `sp4 member`: symplectic and congruence membership of a 4×4 matrix.
pub fn sp4_member_cmd(matrix: &str, modulus: u64, kind: &str) -> Out {
    let kind = parse_kind(kind)?;
    let rows: [[i64; 4]; 4] = serde_json::from_str(matrix)?;
    let m = Sp4Mat { e: rows };
    let symplectic = sp4_member(&m);
    let (in_level, in_plus) = if symplectic {
        (
            Some(sp4_level_member(&m, modulus, kind)?),
            Some(gamma_plus_member(&m, modulus, kind)?),
        )
    } else {
        (None, None)
    };
    let v = json!({
        "modulus": modulus,
        "kind": if kind == PlusKind::Gamma { "gamma" } else { "gamma1" },
        "symplectic": symplectic,
        "in_level": in_level,
        "in_plus": in_plus,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

/// `sp4 structure-check`: validate a level structure and its swap class.
pub fn sp4_structure_check(kind: &str, modulus: u64, points: &str) -> Out {
    let kind = parse_kind(kind)?;
    let pts: Vec<[u64; 4]> = serde_json::from_str(points)?;
    let v = match LevelStructure::new(kind, modulus, pts) {
        Err(e) => json!({
            "valid": false,
            "reason": e.to_string(),
        }),
        Ok(s) => {
            let twisted = s.is_twisted_shape();
            let swap_invariant = if twisted {
                Some(twisted_swap_invariance(&s)?)
            } else {
                // The swap still acts; report whether the result is
                // equivalent as a structure.
                Some(structure_equiv(&s.swap(), &s)?)
            };
            json!({
                "valid": true,
                "twisted_shape": twisted,
                "swap_invariant": swap_invariant,
            })
        }
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&v)?))
}

/// `cache purge`.
pub fn cache_purge(cache: &Cache) -> Out {
    let removed = cache.purge();
    Ok(format!("{}\n", serde_json::to_string_pretty(&json!({ "removed": removed }))?))
}
