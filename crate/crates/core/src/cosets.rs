//! Coset tables of PΓ in PSL₂(Z), cusps and widths, genus, and the cusp
//! atlas of X₁(N) for squarefree odd N.
//!
//! # Conventions
//!
//! - Cosets are right cosets PΓ·g, acted on by right multiplication.
//! - Cosets are identified through the finite quotient: the image of Γ in
//!   SL₂(Z/L), L = lcm(N₁,N₂), is exactly the set of matrices satisfying
//!   the two congruence conditions, so PΓ·g is labeled by the
//!   lexicographically least element of {±h·ḡ : h in the image}.
//! - The BFS spanning tree uses generator order T before S; coset 0 is PΓ.
//! - Cusps are the ⟨T⟩-cycles; the width is the cycle length and the
//!   representative is rep(∞) for the first coset rep in the cycle.

use crate::arith::{divisors, euler_phi, factorize, inv_mod, is_squarefree};
use crate::error::{Error, Result};
use crate::sl2::{Gen, GroupSpec, Mat2, ModMat2};
use num_integer::Integer;
use std::collections::HashMap;

/// Congruence conditions cutting out a finite-index subgroup: the matrices
/// ≡ upper unipotent with unit diagonal mod n1 and ≡ I mod n2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    /// Γ₁-type level.
    pub n1: u64,
    /// Principal level.
    pub n2: u64,
}

impl Conditions {
    fn modulus(&self) -> u64 {
        self.n1.lcm(&self.n2)
    }

    fn holds(&self, m: &ModMat2) -> bool {
        let n1 = self.n1;
        let n2 = self.n2;
        debug_assert!(m.m % n1 == 0 && m.m % n2 == 0);
        m.e[0] % n1 == 1 % n1
            && m.e[2] % n1 == 0
            && m.e[3] % n1 == 1 % n1
            && m.e[0] % n2 == 1 % n2
            && m.e[1] % n2 == 0
            && m.e[2] % n2 == 0
            && m.e[3] % n2 == 1 % n2
    }

    /// Enumerate the full image subgroup mod the modulus by CRT over prime
    /// powers (brute force locally; prime powers stay desk-scale).
    fn image_elements(&self) -> Vec<ModMat2> {
        let l = self.modulus();
        if l == 1 {
            return vec![ModMat2::identity(1)];
        }
        let mut lists: Vec<(u64, Vec<[u64; 4]>)> = Vec::new();
        for (p, e) in factorize(l) {
            let pe = p.pow(e);
            let mut local = Vec::new();
            for a in 0..pe {
                for b in 0..pe {
                    for c in 0..pe {
                        for d in 0..pe {
                            if ((a * d) % pe + pe - (b * c) % pe) % pe != 1 % pe {
                                continue;
                            }
                            let m = ModMat2 { m: pe, e: [a, b, c, d] };
                            let cond = Conditions {
                                n1: gcd_pow(self.n1, p, e),
                                n2: gcd_pow(self.n2, p, e),
                            };
                            if cond.holds(&m) {
                                local.push(m.e);
                            }
                        }
                    }
                }
            }
            lists.push((pe, local));
        }
        // CRT combine.
        let mut acc: Vec<ModMat2> = vec![ModMat2::identity(l)];
        let mut seen_mod = 1u64;
        for (pe, local) in lists {
            let mut next = Vec::with_capacity(acc.len() * local.len());
            for base in &acc {
                for loc in &local {
                    let mut e = [0u64; 4];
                    for k in 0..4 {
                        e[k] = crt_pair(base.e[k], seen_mod, loc[k], pe, l);
                    }
                    next.push(ModMat2 { m: l, e });
                }
            }
            seen_mod *= pe;
            acc = next;
        }
        acc
    }
}

/// The p-power part of n capped at p^e (the local condition level).
fn gcd_pow(n: u64, p: u64, e: u32) -> u64 {
    let mut out = 1u64;
    let mut n = n;
    for _ in 0..e {
        if n % p == 0 {
            out *= p;
            n /= p;
        }
    }
    out
}

/// CRT: x ≡ a mod m1 (m1 | l), x ≡ b mod m2, gcd(m1,m2)=1, result mod l.
fn crt_pair(a: u64, m1: u64, b: u64, m2: u64, l: u64) -> u64 {
    if m1 == 1 {
        return b % l;
    }
    // x = a + m1 * t, t ≡ (b - a) * m1^{-1} mod m2.
    let m1_inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
    let diff = (b % m2 + m2 - a % m2) % m2;
    let t = diff * m1_inv % m2;
    (a + m1 % l * t) % l
}

/// The coset table of PΓ in PSL₂(Z) for a congruence-condition subgroup.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// The defining congruence conditions.
    pub cond: Conditions,
    size: usize,
    perm_t: Vec<usize>,
    perm_t_inv: Vec<usize>,
    perm_s: Vec<usize>,
    /// BFS tree representative of each coset (exact integer matrix).
    reps: Vec<Mat2>,
    /// (parent, generator) tree edge for each non-root coset.
    tree_parent: Vec<Option<(usize, Gen)>>,
    label_of: HashMap<[u64; 4], usize>,
    modulus: u64,
    image: Vec<ModMat2>,
}

impl CosetTable {
    /// Build the coset table for Γ = Γ₁(N₁) ∩ Γ(N₂).
    pub fn build(spec: &GroupSpec) -> CosetTable {
        Self::build_conditions(Conditions {
            n1: spec.n1(),
            n2: spec.n2(),
        })
    }

    /// Build the coset table of the principal congruence group Γ(m).
    pub fn build_principal(m: u64) -> CosetTable {
        Self::build_conditions(Conditions { n1: 1, n2: m })
    }

    /// Core construction from congruence conditions, default tree order.
    pub fn build_conditions(cond: Conditions) -> CosetTable {
        Self::build_conditions_ordered(cond, [Gen::T, Gen::S])
    }

    /// Construction with an explicit BFS generator order; this changes the
    /// spanning tree and the coset numbering but not the group.
    pub fn build_conditions_ordered(cond: Conditions, order: [Gen; 2]) -> CosetTable {
        let modulus = cond.modulus();
        let image = cond.image_elements();
        let canon = |g: &ModMat2| -> [u64; 4] {
            let mut best: Option<[u64; 4]> = None;
            for h in &image {
                let hg = h.mul(g);
                for cand in [hg.e, hg.neg().e] {
                    if best.is_none() || cand < best.unwrap() {
                        best = Some(cand);
                    }
                }
            }
            best.unwrap()
        };

        let id_mod = ModMat2::identity(modulus);
        let mut label_of = HashMap::new();
        let mut mods: Vec<ModMat2> = vec![id_mod];
        let mut reps = vec![Mat2::identity()];
        let mut tree_parent: Vec<Option<(usize, Gen)>> = vec![None];
        label_of.insert(canon(&id_mod), 0usize);

        let t_mod = Mat2::t().reduce(modulus);
        let s_mod = Mat2::s().reduce(modulus);

        let mut perm_t: Vec<Option<usize>> = vec![None];
        let mut perm_s: Vec<Option<usize>> = vec![None];
        let mut head = 0usize;
        while head < mods.len() {
            for g in order {
                let (gm, gx) = match g {
                    Gen::T => (t_mod, Mat2::t()),
                    Gen::S => (s_mod, Mat2::s()),
                };
                let next_mod = mods[head].mul(&gm);
                let key = canon(&next_mod);
                let idx = match label_of.get(&key) {
                    Some(&i) => i,
                    None => {
                        let i = mods.len();
                        label_of.insert(key, i);
                        mods.push(next_mod);
                        reps.push(reps[head].mul(&gx));
                        tree_parent.push(Some((head, g)));
                        perm_t.push(None);
                        perm_s.push(None);
                        i
                    }
                };
                match g {
                    Gen::T => perm_t[head] = Some(idx),
                    Gen::S => perm_s[head] = Some(idx),
                }
            }
            head += 1;
        }
        let size = mods.len();
        let perm_t: Vec<usize> = perm_t.into_iter().map(Option::unwrap).collect();
        let perm_s: Vec<usize> = perm_s.into_iter().map(Option::unwrap).collect();
        let mut perm_t_inv = vec![0usize; size];
        for (i, &j) in perm_t.iter().enumerate() {
            perm_t_inv[j] = i;
        }
        // PSL2(Z) relations must hold on the action.
        for i in 0..size {
            assert_eq!(perm_s[perm_s[i]], i, "S^2 must act trivially");
            let st = |k: usize| perm_s[perm_t[k]];
            assert_eq!(st(st(st(i))), i, "(TS)^3 must act trivially");
        }
        CosetTable {
            cond,
            size,
            perm_t,
            perm_t_inv,
            perm_s,
            reps,
            tree_parent,
            label_of,
            modulus,
            image,
        }
    }

    /// Number of cosets, the index of PΓ in PSL₂(Z).
    pub fn size(&self) -> usize {
        self.size
    }

    /// Index of Γ in SL₂(Z); equals twice the PSL index since −I ∉ Γ.
    pub fn sl2_index(&self) -> usize {
        2 * self.size
    }

    /// Image of coset i under right multiplication by T.
    pub fn act_t(&self, i: usize) -> usize {
        self.perm_t[i]
    }

    /// Image of coset i under right multiplication by T⁻¹.
    pub fn act_t_inv(&self, i: usize) -> usize {
        self.perm_t_inv[i]
    }

    /// Image of coset i under right multiplication by S (an involution).
    pub fn act_s(&self, i: usize) -> usize {
        self.perm_s[i]
    }

    /// Act by a generator with optional inversion.
    pub fn act(&self, i: usize, g: Gen, inverse: bool) -> usize {
        match (g, inverse) {
            (Gen::T, false) => self.perm_t[i],
            (Gen::T, true) => self.perm_t_inv[i],
            (Gen::S, _) => self.perm_s[i],
        }
    }

    /// BFS tree representative of coset i (exact matrix, PΓ·rep = coset i).
    pub fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }

    /// Tree edge into coset i: (parent, generator), None for the root.
    pub fn tree_parent(&self, i: usize) -> Option<(usize, Gen)> {
        self.tree_parent[i]
    }

    /// True if the directed edge (i, g) is a spanning-tree edge in either
    /// direction.
    pub fn is_tree_edge(&self, i: usize, g: Gen, inverse: bool) -> bool {
        let j = self.act(i, g, inverse);
        // Forward: j was discovered from i by g (un-inverted edges only
        // exist in BFS direction, but crossing them backwards is still the
        // same undirected edge).
        if !inverse || g == Gen::S {
            if self.tree_parent[j] == Some((i, g)) {
                return true;
            }
        }
        if inverse || g == Gen::S {
            if self.tree_parent[i] == Some((j, g)) {
                return true;
            }
        }
        false
    }

    /// Coset index of an explicit SL₂(Z) matrix.
    pub fn coset_of(&self, m: &Mat2) -> usize {
        let g = m.reduce(self.modulus);
        self.coset_of_mod(&g)
    }

    /// Coset index of a matrix mod the table modulus.
    pub fn coset_of_mod(&self, g: &ModMat2) -> usize {
        let mut best: Option<[u64; 4]> = None;
        for h in &self.image {
            let hg = h.mul(g);
            for cand in [hg.e, hg.neg().e] {
                if best.is_none() || cand < best.unwrap() {
                    best = Some(cand);
                }
            }
        }
        *self
            .label_of
            .get(&best.unwrap())
            .expect("action is transitive; every unimodular matrix has a coset")
    }

    /// True if ±M lies in ±Γ (i.e. the PSL image of M is in PΓ).
    pub fn contains_projectively(&self, m: &Mat2) -> bool {
        self.coset_of(m) == 0
    }

    /// True if M itself, with its sign, satisfies the defining congruence
    /// conditions.
    pub fn member_exact(&self, m: &Mat2) -> bool {
        self.cond.holds(&m.reduce(self.modulus))
    }

    /// Stable fingerprint of the permutation action, for guarding
    /// cross-presentation data.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64; // FNV-1a
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x100000001b3);
        };
        eat(self.cond.n1);
        eat(self.cond.n2);
        for &p in self.perm_t.iter().chain(self.perm_s.iter()) {
            eat(p as u64);
        }
        h
    }
}

/// A cusp class of the subgroup: a ⟨T⟩-cycle of cosets.
#[derive(Clone, Debug)]
pub struct CuspClass {
    /// Reduced fraction (p, q), q ≥ 0; (1, 0) is ∞.
    pub representative: (num_bigint::BigInt, num_bigint::BigInt),
    /// Cusp width = cycle length.
    pub width: u64,
    /// Coset indices in the cycle, starting from the least.
    pub orbit: Vec<usize>,
}

impl CuspClass {
    /// True for the class of ∞.
    pub fn is_infinity(&self) -> bool {
        use num_traits::Zero;
        self.representative.1.is_zero()
    }
}

/// Cusps of the table: T-cycles with widths and traced representatives.
pub fn cusps(table: &CosetTable) -> Vec<CuspClass> {
    let mut seen = vec![false; table.size()];
    let mut out = Vec::new();
    for start in 0..table.size() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut cur = table.act_t(start);
        while cur != start {
            seen[cur] = true;
            orbit.push(cur);
            cur = table.act_t(cur);
        }
        let rep = table.rep(start);
        // rep maps ∞ to a/c (first column).
        let (mut p, mut q) = (rep.a.clone(), rep.c.clone());
        let g = p.gcd(&q);
        use num_traits::{Signed, Zero};
        if !g.is_zero() {
            p /= &g;
            q /= &g;
        }
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        out.push(CuspClass {
            representative: (p, q),
            width: orbit.len() as u64,
            orbit,
        });
    }
    out
}

/// Cusp class index of a point p/q of P¹(Q) (q may be 0 for ∞).
pub fn cusp_class_of(table: &CosetTable, cusp_list: &[CuspClass], p: i64, q: i64) -> usize {
    use num_bigint::BigInt;
    let g = p.gcd(&q);
    let (p, q) = if g != 0 { (p / g, q / g) } else { (p, q) };
    // Column (p,q) completes to an SL2 matrix.
    let e = i64::extended_gcd(&p, &q);
    // x*p + y*q = 1 -> det [[p, -y],[q, x]] = p x + q y = 1.
    let m = Mat2::from_bigints(
        BigInt::from(p),
        BigInt::from(-e.y),
        BigInt::from(q),
        BigInt::from(e.x),
    )
    .expect("unimodular completion");
    let coset = table.coset_of(&m);
    cusp_list
        .iter()
        .position(|c| c.orbit.contains(&coset))
        .expect("every coset lies in a T-cycle")
}

/// The shear generating the stabilizer of the given cusp inside Γ:
/// rep · T^width · rep⁻¹, sign-normalized into Γ.
pub fn cusp_shear(spec: &GroupSpec, table: &CosetTable, cusp: &CuspClass) -> Result<Mat2> {
    let i = cusp.orbit[0];
    let rep = table.rep(i);
    let shear = rep
        .mul(&Mat2::t_pow(cusp.width as i64))
        .mul(&rep.inv());
    if spec.member(&shear)? {
        Ok(shear)
    } else if spec.member(&shear.neg())? {
        Ok(shear.neg())
    } else {
        Err(Error::Inconsistency {
            context: "cusp shear is not in the group up to sign".into(),
        })
    }
}

/// Genus from the torsion-free formula, cross-checked against the cycle
/// structure of the action (no S- or ST-fixed points allowed).
pub fn genus(table: &CosetTable, cusp_list: &[CuspClass]) -> Result<u64> {
    let size = table.size() as i64;
    let n = cusp_list.len() as i64;
    // Torsion-freeness: S acts without fixed points, TS acts in 3-cycles.
    for i in 0..table.size() {
        if table.act_s(i) == i {
            return Err(Error::Inconsistency {
                context: "S has a fixed coset; the group has 2-torsion".into(),
            });
        }
        let st = |k: usize| table.act_s(table.act_t(k));
        if st(i) == i || st(st(i)) == i {
            return Err(Error::Inconsistency {
                context: "ST has a short cycle; the group has 3-torsion".into(),
            });
        }
    }
    // Index formula and Euler characteristic must agree.
    let by_index = 24 + 2 * size - 12 * n; // 24 * (1 + [SL2:Γ]/24 - n/2)
    let by_euler = 12 + size - 6 * n; // 12 * (1 + sizePSL/12 - n/2)
    if by_index != 2 * by_euler || by_index % 24 != 0 {
        return Err(Error::Inconsistency {
            context: format!("genus formulas disagree: {by_index}/24 vs {by_euler}/12"),
        });
    }
    let g = by_index / 24;
    if g < 0 {
        return Err(Error::Inconsistency {
            context: "negative genus".into(),
        });
    }
    Ok(g as u64)
}

/// A cusp label of X₁(N) for squarefree odd N: the point b/(M₂·a).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CuspLabelX1 {
    /// Width divisor M₁ | N.
    pub m1: u64,
    /// Unit a mod M₁ (1 when M₁ = 1).
    pub a: u64,
    /// Residue b mod M₂ = N/M₁ with gcd(b, M₂) = 1 (1 when M₂ = 1).
    pub b: u64,
    /// Ambient level N.
    pub n: u64,
}

impl CuspLabelX1 {
    /// Width of the labeled cusp.
    pub fn width(&self) -> u64 {
        self.m1
    }

    /// M₂ = N / M₁.
    pub fn m2(&self) -> u64 {
        self.n / self.m1
    }

    /// Integer lifts (b′, M₂·a) of the labeled point with
    /// gcd(b′, M₂·a′) = 1; the numerator is shifted by multiples of M₂
    /// to clear common factors with a.
    pub fn fraction(&self) -> (i64, i64) {
        let m2 = self.m2();
        let a = self.a.max(1);
        let den = (m2 * a) as i64;
        if m2 == 1 {
            // b ≡ 1 mod 1; choose numerator 1.
            return (1, den);
        }
        let mut b = self.b as i64;
        let den_u = m2 * a;
        while (b as u64).gcd(&den_u) != 1 {
            b += m2 as i64;
        }
        (b, den)
    }

    /// Label string "M1:a:b".
    pub fn to_string_label(&self) -> String {
        format!("{}:{}:{}", self.m1, self.a, self.b)
    }

    /// Parse "M1:a:b" for level n.
    pub fn parse(s: &str, n: u64) -> Result<CuspLabelX1> {
        let parts: Vec<_> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput {
                context: format!("bad cusp label '{s}', expected M1:a:b"),
            });
        }
        let nums: Vec<u64> = parts
            .iter()
            .map(|p| p.parse().map_err(|_| Error::InvalidInput {
                context: format!("bad cusp label component '{p}'"),
            }))
            .collect::<Result<_>>()?;
        let label = CuspLabelX1 {
            m1: nums[0],
            a: nums[1],
            b: nums[2],
            n,
        };
        if n % label.m1 != 0 {
            return Err(Error::InvalidInput {
                context: format!("M1 = {} does not divide N = {n}", label.m1),
            });
        }
        Ok(label.canonicalize())
    }

    /// Canonical representative under (a, b) ~ (−a, −b): the
    /// lexicographically least (a mod M₁, b mod M₂) of the two choices.
    pub fn canonicalize(&self) -> CuspLabelX1 {
        let m1 = self.m1;
        let m2 = self.m2();
        let a = if m1 == 1 { 1 } else { self.a % m1 };
        let b = if m2 == 1 { 1 } else { self.b % m2 };
        let neg_a = if m1 == 1 { 1 } else { (m1 - a) % m1 };
        let neg_b = if m2 == 1 { 1 } else { (m2 - b) % m2 };
        let cand1 = (a, b);
        let cand2 = (if m1 == 1 { 1 } else { neg_a }, if m2 == 1 { 1 } else { neg_b });
        let (a, b) = cand1.min(cand2);
        CuspLabelX1 {
            m1,
            a: if m1 == 1 { 1 } else { a },
            b: if m2 == 1 { 1 } else { b },
            n: self.n,
        }
    }
}

/// Full cusp atlas of X₁(N), N squarefree odd ≥ 5: canonical labels under
/// the ± equivalence, count 2^{r−1} ∏ (pᵢ − 1).
pub fn cusp_atlas_x1(n: u64) -> Result<Vec<CuspLabelX1>> {
    if n < 5 || n % 2 == 0 || !is_squarefree(n) {
        return Err(Error::InvalidInput {
            context: format!("atlas requires squarefree odd N >= 5, got {n}"),
        });
    }
    let mut out = Vec::new();
    for m1 in divisors(n) {
        let m2 = n / m1;
        let mut seen = std::collections::HashSet::new();
        for a in 1..=m1.max(1) {
            if m1 > 1 && (a >= m1 || a.gcd(&m1) != 1) {
                continue;
            }
            if m1 == 1 && a != 1 {
                continue;
            }
            for b in 1..=m2.max(1) {
                if m2 > 1 && (b >= m2 || b.gcd(&m2) != 1) {
                    continue;
                }
                if m2 == 1 && b != 1 {
                    continue;
                }
                let label = CuspLabelX1 { m1, a, b, n }.canonicalize();
                if seen.insert(label.clone()) {
                    out.push(label);
                }
            }
        }
    }
    // Count check: 2^{r-1} * prod (p_i - 1).
    let r = factorize(n).len() as u32;
    let expected: u64 = (1 << (r - 1)) * factorize(n).iter().map(|&(p, _)| p - 1).product::<u64>();
    if out.len() as u64 != expected {
        return Err(Error::Inconsistency {
            context: format!("atlas size {} != expected {expected}", out.len()),
        });
    }
    Ok(out)
}

/// The width-selecting matrix σ for a cusp label: first column
/// (b′, M₂·a)ᵀ, second column the minimal extended-gcd completion
/// (least |top-right| entry, ties to the nonnegative choice).
/// For the ∞ label (1,1,1) this is the identity.
pub fn sigma_matrix(label: &CuspLabelX1) -> Result<Mat2> {
    if label.m1 == 1 && label.b == 1 {
        return Ok(Mat2::identity());
    }
    let (p, q) = label.fraction();
    let e = i64::extended_gcd(&p, &q);
    // p*x + q*y = 1; det [[p, u],[q, v]] = p v - q u = 1 with v = x, u = -y.
    let (mut u, mut v) = (-e.y, e.x);
    // Minimize |u| over u -> u + k p, v -> v + k q.
    if p != 0 {
        let k = -(u as i128 / p as i128) as i64;
        let (mut bu, mut bv) = (u + k * p, v + k * q);
        for dk in [-1i64, 0, 1] {
            let cu = u + (k + dk) * p;
            let cv = v + (k + dk) * q;
            if cu.abs() < bu.abs() || (cu.abs() == bu.abs() && cu >= 0 && bu < 0) {
                bu = cu;
                bv = cv;
            }
        }
        u = bu;
        v = bv;
    }
    Mat2::new(p, u, q, v)
}

/// Euler totient of n (re-export for callers sizing atlas slices).
pub fn phi(n: u64) -> u64 {
    euler_phi(n)
}
