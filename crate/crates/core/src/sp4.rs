//! Sp₄(Z) arithmetic, the plus-type groups Γ(N)·⟨g⁺⟩ and Γ₁(N)·⟨g⁺⟩,
//! plus-type level structures on (Z/N)⁴ with the Weil pairing, swap
//! invariance of twisted structures, and Siegel weight restriction
//! bookkeeping.
//!
//! The finite model works with coordinates on (Z/N)⁴ = first factor
//! (e₁,e₂) ⊕ second factor (e₃,e₄), matching the block symplectic form.
//! The Galois twist acts trivially on these coordinates: only the
//! combinatorial swap invariance of the structures is tested here.

use crate::error::{Error, Result};
use std::collections::HashSet;

/// A 4×4 integer matrix, candidate element of Sp₄(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sp4Mat {
    /// Row-major entries.
    pub e: [[i64; 4]; 4],
}

impl Sp4Mat {
    /// Identity.
    pub fn identity() -> Sp4Mat {
        let mut e = [[0; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = 1;
        }
        Sp4Mat { e }
    }

    /// The block symplectic form: two [[0,1],[−1,0]] blocks on the
    /// diagonal.
    pub fn j() -> Sp4Mat {
        Sp4Mat {
            e: [
                [0, 1, 0, 0],
                [-1, 0, 0, 0],
                [0, 0, 0, 1],
                [0, 0, -1, 0],
            ],
        }
    }

    /// The coset representative g⁺ = blockdiag([[0,1],[−1,0]], I₂).
    pub fn g_plus() -> Sp4Mat {
        Sp4Mat {
            e: [
                [0, 1, 0, 0],
                [-1, 0, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 0, 1],
            ],
        }
    }

    /// Inverse of g⁺ (its cube in PSp is not needed; the block inverts).
    pub fn g_plus_inv() -> Sp4Mat {
        Sp4Mat {
            e: [
                [0, -1, 0, 0],
                [1, 0, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 0, 1],
            ],
        }
    }

    /// Transpose.
    pub fn transpose(&self) -> Sp4Mat {
        let mut out = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[j][i] = self.e[i][j];
            }
        }
        Sp4Mat { e: out }
    }

    /// Product.
    pub fn mul(&self, o: &Sp4Mat) -> Sp4Mat {
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0i64;
                for k in 0..4 {
                    acc += self.e[i][k] * o.e[k][j];
                }
                out[i][j] = acc;
            }
        }
        Sp4Mat { e: out }
    }

    /// Entries reduced mod n.
    pub fn reduce(&self, n: u64) -> [[u64; 4]; 4] {
        let m = n as i64;
        self.e.map(|row| row.map(|x| x.rem_euclid(m) as u64))
    }
}

/// Symplectic membership: MᵀJM = J.
pub fn sp4_member(m: &Sp4Mat) -> bool {
    m.transpose().mul(&Sp4Mat::j()).mul(m) == Sp4Mat::j()
}

/// Which congruence shape a level (structure or group) has.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlusKind {
    /// Principal: identity mod N; structures carry four points.
    Gamma,
    /// Γ₁-type: upper triangular unipotent mod N; structures carry two
    /// points.
    Gamma1,
}

fn reduced_is_identity(r: &[[u64; 4]; 4], n: u64) -> bool {
    (0..4).all(|i| (0..4).all(|j| r[i][j] == if i == j { 1 % n } else { 0 }))
}

fn reduced_is_unipotent_upper(r: &[[u64; 4]; 4], n: u64) -> bool {
    (0..4).all(|i| {
        r[i][i] == 1 % n && (0..i).all(|j| r[i][j] == 0)
    })
}

/// Membership in the plain congruence subgroup Γ(N) or Γ₁(N) of Sp₄(Z),
/// decided mod N.
pub fn sp4_level_member(m: &Sp4Mat, n: u64, kind: PlusKind) -> Result<bool> {
    if !sp4_member(m) {
        return Err(Error::InvalidInput {
            context: "matrix is not symplectic".into(),
        });
    }
    let r = m.reduce(n);
    Ok(match kind {
        PlusKind::Gamma => reduced_is_identity(&r, n),
        PlusKind::Gamma1 => reduced_is_unipotent_upper(&r, n),
    })
}

/// Membership in the plus group Γ(N)·⟨g⁺⟩ or Γ₁(N)·⟨g⁺⟩ in its two-coset
/// form: M or M·(g⁺)⁻¹ lies in the plain subgroup.
pub fn gamma_plus_member(m: &Sp4Mat, n: u64, kind: PlusKind) -> Result<bool> {
    Ok(sp4_level_member(m, n, kind)?
        || sp4_level_member(&m.mul(&Sp4Mat::g_plus_inv()), n, kind)?)
}

/// The symplectic pairing ⟨x, y⟩ = xᵀJy mod n.
pub fn pairing(x: &[u64; 4], y: &[u64; 4], n: u64) -> u64 {
    let j = Sp4Mat::j();
    let mut acc: i64 = 0;
    for r in 0..4 {
        for c in 0..4 {
            acc += (x[r] % n) as i64 * j.e[r][c] * (y[c] % n) as i64;
        }
    }
    acc.rem_euclid(n as i64) as u64
}

/// Isotropy of the subgroup generated by two points: by bilinearity and
/// antisymmetry it suffices that the generators pair to zero.
pub fn isotropy_check(p1: &[u64; 4], p2: &[u64; 4], n: u64) -> bool {
    pairing(p1, p2, n) == 0
}

fn det4_mod(rows: &[[u64; 4]; 4], n: u64) -> u64 {
    // Permutation expansion; 24 terms is fine at this size.
    let mut acc: i64 = 0;
    let mut perm = [0usize, 1, 2, 3];
    fn go(perm: &mut [usize; 4], k: usize, sign: i64, rows: &[[u64; 4]; 4], n: u64, acc: &mut i64) {
        if k == 4 {
            let mut term: i64 = sign;
            for (i, &p) in perm.iter().enumerate() {
                term = term * (rows[i][p] % n) as i64 % n as i64;
            }
            *acc = (*acc + term).rem_euclid(n as i64);
            return;
        }
        for i in k..4 {
            perm.swap(k, i);
            let s = if i == k { sign } else { -sign };
            go(perm, k + 1, s, rows, n, acc);
            perm.swap(k, i);
        }
    }
    go(&mut perm, 0, 1, rows, n, &mut acc);
    acc.rem_euclid(n as i64) as u64
}

/// A plus-type level structure on (Z/N)⁴.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStructure {
    /// Shape: four points (Γ(N)⁺) or two (Γ₁(N)⁺).
    pub kind: PlusKind,
    /// Modulus N.
    pub modulus: u64,
    /// The points, reduced mod N.
    pub points: Vec<[u64; 4]>,
}

impl LevelStructure {
    /// Validate the defining invariant: four points must generate
    /// (Z/N)⁴; two points must span a totally isotropic subgroup.
    pub fn new(kind: PlusKind, modulus: u64, points: Vec<[u64; 4]>) -> Result<LevelStructure> {
        if modulus < 2 {
            return Err(Error::InvalidInput {
                context: "modulus must be at least 2".into(),
            });
        }
        let points: Vec<[u64; 4]> = points
            .into_iter()
            .map(|p| p.map(|x| x % modulus))
            .collect();
        match kind {
            PlusKind::Gamma => {
                if points.len() != 4 {
                    return Err(Error::InvalidInput {
                        context: format!("Γ(N)⁺ structure needs 4 points, got {}", points.len()),
                    });
                }
                let rows = [points[0], points[1], points[2], points[3]];
                let d = det4_mod(&rows, modulus);
                if num_integer::gcd(d, modulus) != 1 {
                    return Err(Error::InvalidInput {
                        context: "points do not generate (Z/N)⁴".into(),
                    });
                }
            }
            PlusKind::Gamma1 => {
                if points.len() != 2 {
                    return Err(Error::InvalidInput {
                        context: format!("Γ₁(N)⁺ structure needs 2 points, got {}", points.len()),
                    });
                }
                if !isotropy_check(&points[0], &points[1], modulus) {
                    return Err(Error::InvalidInput {
                        context: "points do not span a totally isotropic subgroup".into(),
                    });
                }
            }
        }
        Ok(LevelStructure {
            kind,
            modulus,
            points,
        })
    }

    /// Twisted Γ₁(N)⁺ structure from one factor-level point P:
    /// P̃₁ = (P, 0), P̃₂ = (0, P).
    pub fn twisted_gamma1(p: [u64; 2], n: u64) -> Result<LevelStructure> {
        LevelStructure::new(
            PlusKind::Gamma1,
            n,
            vec![[p[0], p[1], 0, 0], [0, 0, p[0], p[1]]],
        )
    }

    /// Twisted Γ(N)⁺ structure from a factor-level pair (P, Q):
    /// P̃₁ = (P,0), P̃₂ = (0,P), Q̃₁ = (Q,0), Q̃₂ = (0,Q).
    pub fn twisted_gamma(p: [u64; 2], q: [u64; 2], n: u64) -> Result<LevelStructure> {
        LevelStructure::new(
            PlusKind::Gamma,
            n,
            vec![
                [p[0], p[1], 0, 0],
                [0, 0, p[0], p[1]],
                [q[0], q[1], 0, 0],
                [0, 0, q[0], q[1]],
            ],
        )
    }

    /// Apply the factor swap (x, y) ↦ (y, x) on (Z/N)² ⊕ (Z/N)² to every
    /// point.
    pub fn swap(&self) -> LevelStructure {
        let points = self
            .points
            .iter()
            .map(|p| [p[2], p[3], p[0], p[1]])
            .collect();
        LevelStructure {
            kind: self.kind,
            modulus: self.modulus,
            points,
        }
    }

    /// True when every point has the twisted shape: paired points that
    /// are factor swaps of one another, each supported in one factor.
    pub fn is_twisted_shape(&self) -> bool {
        self.points.chunks(2).all(|c| {
            c.len() == 2
                && c[0][2] == 0
                && c[0][3] == 0
                && c[1] == [0, 0, c[0][0], c[0][1]]
        })
    }
}

/// Equivalence of level structures: unordered equality of the pair
/// {P₁,P₂} (and of {P₃,P₄} for the four-point shape).
pub fn structure_equiv(s1: &LevelStructure, s2: &LevelStructure) -> Result<bool> {
    if s1.kind != s2.kind || s1.modulus != s2.modulus {
        return Err(Error::InvalidInput {
            context: "level structures of different kind or modulus".into(),
        });
    }
    let pair_eq = |a: &[[u64; 4]], b: &[[u64; 4]]| {
        (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
    };
    Ok(s1
        .points
        .chunks(2)
        .zip(s2.points.chunks(2))
        .all(|(a, b)| pair_eq(a, b)))
}

/// Swap invariance of a twisted structure: the factor swap maps it to an
/// equivalent structure. Errors when the input is not of twisted shape.
pub fn twisted_swap_invariance(s: &LevelStructure) -> Result<bool> {
    if !s.is_twisted_shape() {
        return Err(Error::InvalidInput {
            context: "structure is not of twisted shape".into(),
        });
    }
    structure_equiv(&s.swap(), s)
}

/// Orders of the mod-N images around the plus construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlusClosureReport {
    /// Order of the mod-N image of the plain subgroup.
    pub base_order: usize,
    /// Order of the two-coset set Γ̄ ∪ Γ̄·g⁺, the set the membership test
    /// decides; always exactly twice the base for N ≥ 3.
    pub two_coset_order: usize,
    /// Order of the full group generated mod N by the base image and g⁺.
    /// Strictly larger than the two-coset set for N ≥ 3: the product set
    /// is not a subgroup mod N ((g⁺)² is not in the base image).
    pub full_closure_order: usize,
}

/// Enumerate the mod-N image of Γ(N) or Γ₁(N) ≤ Sp₄(Z), form the
/// two-coset set with g⁺, and close it into a group by BFS.
pub fn plus_closure_report(n: u64, kind: PlusKind) -> Result<PlusClosureReport> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidInput {
            context: "closure enumeration is desk-scale: 2 ≤ N ≤ 7".into(),
        });
    }
    let base: Vec<[[u64; 4]; 4]> = match kind {
        PlusKind::Gamma => vec![Sp4Mat::identity().reduce(n)],
        PlusKind::Gamma1 => enumerate_unipotent_symplectic(n),
    };
    let g = Sp4Mat::g_plus().reduce(n);
    let mut two_coset: HashSet<[[u64; 4]; 4]> = base.iter().copied().collect();
    for b in &base {
        two_coset.insert(mat_mul_mod(b, &g, n));
    }
    // BFS group closure from the base image and g⁺.
    let mut gens = base.clone();
    gens.push(g);
    let mut seen: HashSet<[[u64; 4]; 4]> = HashSet::new();
    let mut queue = vec![Sp4Mat::identity().reduce(n)];
    seen.insert(queue[0]);
    while let Some(m) = queue.pop() {
        for x in &gens {
            let p = mat_mul_mod(&m, x, n);
            if seen.insert(p) {
                queue.push(p);
            }
        }
    }
    Ok(PlusClosureReport {
        base_order: base.len(),
        two_coset_order: two_coset.len(),
        full_closure_order: seen.len(),
    })
}

fn mat_mul_mod(a: &[[u64; 4]; 4], b: &[[u64; 4]; 4], n: u64) -> [[u64; 4]; 4] {
    let mut out = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0u64;
            for k in 0..4 {
                acc = (acc + a[i][k] * b[k][j]) % n;
            }
            out[i][j] = acc;
        }
    }
    out
}

/// All upper triangular unipotent symplectic matrices mod n, by direct
/// enumeration of the six free entries.
fn enumerate_unipotent_symplectic(n: u64) -> Vec<[[u64; 4]; 4]> {
    let j = Sp4Mat::j().reduce(n);
    let mut out = Vec::new();
    let idx = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let total = n.pow(6);
    for code in 0..total {
        let mut m = Sp4Mat::identity().reduce(n);
        let mut c = code;
        for &(r, col) in &idx {
            m[r][col] = c % n;
            c /= n;
        }
        let mt = transpose_mod(&m);
        if mat_mul_mod(&mat_mul_mod(&mt, &j, n), &m, n) == j {
            out.push(m);
        }
    }
    out
}

fn transpose_mod(a: &[[u64; 4]; 4]) -> [[u64; 4]; 4] {
    let mut out = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[j][i] = a[i][j];
        }
    }
    out
}

/// Exponent pairs of the restriction of a Siegel modular form of weight
/// (k, j): the summands ω^{k+j−i} ⊗ ν^{k+i} for i = 0..j.
pub fn siegel_weight_restriction(k: u64, j: u64) -> Vec<(u64, u64)> {
    (0..=j).map(|i| (k + j - i, k + i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: [i64; 4]) -> Sp4Mat {
        let mut e = [[0; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = d[i];
        }
        Sp4Mat { e }
    }

    #[test]
    fn symplectic_membership() {
        assert!(sp4_member(&Sp4Mat::identity()));
        assert!(sp4_member(&Sp4Mat::g_plus()));
        assert!(sp4_member(&Sp4Mat::j()));
        assert!(!sp4_member(&diag([2, 1, 1, 1])));
        assert_eq!(
            Sp4Mat::g_plus().mul(&Sp4Mat::g_plus_inv()),
            Sp4Mat::identity()
        );
    }

    #[test]
    fn plus_membership() {
        let g = Sp4Mat::g_plus();
        assert!(gamma_plus_member(&g, 5, PlusKind::Gamma1).unwrap());
        assert!(gamma_plus_member(&g, 5, PlusKind::Gamma).unwrap());
        assert!(!sp4_level_member(&g, 5, PlusKind::Gamma1).unwrap());
        // A symplectic lift of I₄ mod 5: two T-blocks with entry 5.
        let lift = Sp4Mat {
            e: [
                [1, 5, 0, 0],
                [0, 1, 0, 0],
                [0, 0, 1, 5],
                [0, 0, 0, 1],
            ],
        };
        assert!(sp4_member(&lift));
        assert!(sp4_level_member(&lift, 5, PlusKind::Gamma).unwrap());
        assert!(gamma_plus_member(&lift, 5, PlusKind::Gamma).unwrap());
        assert!(gamma_plus_member(&lift.mul(&g), 5, PlusKind::Gamma).unwrap());
        assert!(sp4_level_member(&diag([1, 1, 1, 1]), 5, PlusKind::Gamma1).unwrap());
        assert!(sp4_level_member(&diag([2, 1, 1, 1]), 5, PlusKind::Gamma).is_err());
        // (g⁺)² = −I₂ ⊕ I₂ is outside both plain groups and both coset
        // forms for N > 2.
        let g2 = g.mul(&g);
        assert_eq!(g2, diag([-1, -1, 1, 1]));
        assert!(!gamma_plus_member(&g2, 5, PlusKind::Gamma1).unwrap());
    }

    #[test]
    fn two_coset_set_doubles_but_is_not_a_group() {
        let r = plus_closure_report(3, PlusKind::Gamma1).unwrap();
        assert_eq!(r.two_coset_order, 2 * r.base_order);
        assert!(r.full_closure_order > r.two_coset_order);
        let r = plus_closure_report(3, PlusKind::Gamma).unwrap();
        assert_eq!(r.base_order, 1);
        assert_eq!(r.two_coset_order, 2);
        // ⟨g⁺⟩ mod 3 has order 4.
        assert_eq!(r.full_closure_order, 4);
    }

    #[test]
    fn unipotent_image_is_two_shear_blocks() {
        // Upper unipotent symplectic mod n: two independent shear
        // parameters, order n².
        for n in [3u64, 5] {
            let r = plus_closure_report(n, PlusKind::Gamma1).unwrap();
            assert_eq!(r.base_order, (n * n) as usize);
        }
    }

    #[test]
    fn pairing_and_isotropy() {
        let e1 = [1, 0, 0, 0];
        let e2 = [0, 1, 0, 0];
        let e3 = [0, 0, 1, 0];
        assert!(isotropy_check(&e1, &e3, 5));
        assert!(!isotropy_check(&e1, &e2, 5));
        assert_eq!(pairing(&e1, &e2, 5), 1);
        // Antisymmetry and self-annihilation.
        assert_eq!(pairing(&e2, &e1, 5), 4);
        assert_eq!(pairing(&e1, &e1, 5), 0);
        // The twisted pair from P = (1,0) is isotropic.
        let p1 = [1, 0, 0, 0];
        let p2 = [0, 0, 1, 0];
        assert!(isotropy_check(&p1, &p2, 5));
    }

    #[test]
    fn structure_validation() {
        assert!(LevelStructure::twisted_gamma1([1, 0], 5).is_ok());
        // e₁, e₂ pair nontrivially: rejected.
        assert!(LevelStructure::new(
            PlusKind::Gamma1,
            5,
            vec![[1, 0, 0, 0], [0, 1, 0, 0]]
        )
        .is_err());
        assert!(LevelStructure::twisted_gamma([1, 0], [0, 1], 5).is_ok());
        // A degenerate quadruple does not generate.
        assert!(LevelStructure::twisted_gamma([1, 0], [2, 0], 5).is_err());
        // Kind mismatch is an error, not inequality.
        let a = LevelStructure::twisted_gamma1([1, 0], 5).unwrap();
        let b = LevelStructure::twisted_gamma([1, 0], [0, 1], 5).unwrap();
        assert!(structure_equiv(&a, &b).is_err());
    }

    #[test]
    fn unordered_pair_equivalence() {
        let s = LevelStructure::twisted_gamma1([1, 0], 5).unwrap();
        let mut flipped = s.clone();
        flipped.points.swap(0, 1);
        assert!(structure_equiv(&s, &flipped).unwrap());
        // Replacing P₂ by P₁ + P₂ changes the set.
        let other = LevelStructure::new(
            PlusKind::Gamma1,
            5,
            vec![[1, 0, 0, 0], [1, 0, 1, 0]],
        )
        .unwrap();
        assert!(!structure_equiv(&s, &other).unwrap());
    }

    #[test]
    fn swap_invariance_of_twisted_structures() {
        let s = LevelStructure::twisted_gamma1([1, 2], 5).unwrap();
        assert!(twisted_swap_invariance(&s).unwrap());
        let q = LevelStructure::twisted_gamma([1, 0], [0, 1], 5).unwrap();
        assert!(twisted_swap_invariance(&q).unwrap());
        // Swap is an involution on structures.
        assert_eq!(s.swap().swap(), s);
        // As ordered tuples the swap is NOT trivial: the unordered-set
        // equivalence is what makes the structure descend.
        assert_ne!(s.swap().points, s.points);
        // Non-twisted input is rejected.
        let plain = LevelStructure::new(
            PlusKind::Gamma1,
            5,
            vec![[1, 0, 0, 0], [0, 0, 2, 0]],
        )
        .unwrap();
        assert!(twisted_swap_invariance(&plain).is_err());
    }

    #[test]
    fn weight_restriction_exponents() {
        assert_eq!(siegel_weight_restriction(3, 1), vec![(4, 3), (3, 4)]);
        assert_eq!(siegel_weight_restriction(0, 1), vec![(1, 0), (0, 1)]);
        assert_eq!(siegel_weight_restriction(7, 0), vec![(7, 7)]);
        // Every summand has total weight 2k + j.
        for (k, j) in [(2u64, 3u64), (5, 2), (0, 4)] {
            let terms = siegel_weight_restriction(k, j);
            assert_eq!(terms.len() as u64, j + 1);
            for (a, b) in terms {
                assert_eq!(a + b, 2 * k + j);
            }
        }
    }
}
