//! Bit-vector linear algebra over F₂.
//!
//! Vectors are fixed-length bitsets; the only operations needed upstream are
//! xor, dot products, rank, kernel bases, and span membership.

use serde::{Deserialize, Serialize};

/// A fixed-length vector over F₂, packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// The zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Standard basis vector e_i.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Vector length.
    pub fn len(&self) -> usize {
        self.len
    }

    /// True if the length is zero.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at position i.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Set bit i.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Flip bit i.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// In-place xor with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// F₂ dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= w & o;
        }
        acc.count_ones() % 2 == 1
    }

    /// True if every bit is zero.
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn leading_bit(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hex string, low bit first within each nibble group of 4 bits;
    /// round-trips with [`BitVec::from_hex`].
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        for chunk in 0..self.len.div_ceil(4) {
            let mut nib = 0u8;
            for b in 0..4 {
                let i = chunk * 4 + b;
                if i < self.len && self.get(i) {
                    nib |= 1 << b;
                }
            }
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    /// Parse the hex form produced by [`BitVec::to_hex`].
    pub fn from_hex(s: &str, len: usize) -> Option<Self> {
        if s.len() != len.div_ceil(4) {
            return None;
        }
        let mut v = Self::zeros(len);
        for (chunk, ch) in s.chars().enumerate() {
            let nib = ch.to_digit(16)? as u8;
            for b in 0..4 {
                let i = chunk * 4 + b;
                if nib >> b & 1 == 1 {
                    if i >= len {
                        return None;
                    }
                    v.set(i, true);
                }
            }
        }
        Some(v)
    }
}

/// Row-reduce `rows` in place; returns the pivot column of each surviving
/// nonzero row. Rows end up with distinct leading bits.
fn reduce(rows: &mut Vec<BitVec>) -> Vec<usize> {
    let mut basis: Vec<BitVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut r in rows.drain(..) {
        loop {
            match r.leading_bit() {
                None => break,
                Some(lead) => match pivots.iter().position(|&p| p == lead) {
                    Some(k) => r.xor_assign(&basis[k]),
                    None => {
                        pivots.push(lead);
                        basis.push(r);
                        break;
                    }
                },
            }
        }
    }
    *rows = basis;
    pivots.clone()
}

/// Rank of the span of the given vectors.
pub fn rank(vectors: &[BitVec]) -> usize {
    let mut rows = vectors.to_vec();
    reduce(&mut rows);
    rows.len()
}

/// Basis of the solution space { x : row · x = 0 for every row }.
///
/// All rows must have length `ncols`; the result has `ncols - rank` vectors.
pub fn kernel_basis(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let mut reduced = rows.to_vec();
    let pivots = reduce(&mut reduced);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        // x_free = 1, pivot variables back-solved.
        let mut x = BitVec::unit(ncols, free);
        // Process rows so that each pivot is solved once; rows have distinct
        // pivots, so a single pass in decreasing pivot order suffices.
        let mut order: Vec<usize> = (0..reduced.len()).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(pivots[k]));
        for k in order {
            let row = &reduced[k];
            let p = pivots[k];
            // row · x restricted to non-pivot contribution decides x_p.
            let mut val = false;
            for i in 0..ncols {
                if i != p && row.get(i) && x.get(i) {
                    val = !val;
                }
            }
            x.set(p, val);
        }
        basis.push(x);
    }
    basis
}

/// A reduced spanning set supporting repeated membership queries.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Span {
    /// Build from arbitrary spanning vectors.
    pub fn new(vectors: &[BitVec]) -> Self {
        let mut rows = vectors.to_vec();
        let pivots = reduce(&mut rows);
        Span { rows, pivots }
    }

    /// Dimension of the span.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// True if v lies in the span.
    pub fn contains(&self, v: &BitVec) -> bool {
        let mut r = v.clone();
        loop {
            match r.leading_bit() {
                None => return true,
                Some(lead) => match self.pivots.iter().position(|&p| p == lead) {
                    Some(k) => r.xor_assign(&self.rows[k]),
                    None => return false,
                },
            }
        }
    }
}
