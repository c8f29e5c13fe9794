//! Exact Gaussian elimination over Q and over generic field elements.

use super::{FieldElem, Rat};
use num_traits::Zero;

/// Solve A·x = b over Q, A given as rows. Returns any solution, or `None`
/// if the system is inconsistent.
pub(crate) fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    assert_eq!(b.len(), nrows);
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    // Augmented matrix.
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), ncols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| !Zero::is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].recip();
        for j in col..=ncols {
            let v = &m[rank][j] * &inv;
            m[rank][j] = v;
        }
        for r in 0..nrows {
            if r != rank && !Zero::is_zero(&m[r][col]) {
                let f = m[r][col].clone();
                for j in col..=ncols {
                    let v = &m[r][j] - &f * &m[rank][j];
                    m[r][j] = v;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..nrows {
        if !Zero::is_zero(&m[r][ncols]) {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for col in 0..ncols {
        if let Some(r) = pivot_of_col[col] {
            x[col] = m[r][ncols].clone();
        }
    }
    Some(x)
}

/// Rank of a matrix over any exact field, rows of equal length.
pub fn rank_generic<T: FieldElem>(rows: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].inv().expect("nonzero element must invert");
        for j in col..ncols {
            m[rank][j] = m[rank][j].mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..ncols {
                    let v = m[r][j].sub(&f.mul(&m[rank][j]));
                    m[r][j] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn solve_square_system() {
        // x + y = 3, x - y = 1 -> x = 2, y = 1.
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let x = solve(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve(&a, &[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn generic_rank_matches_minors() {
        let rows = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank_generic(&rows), 2);
    }
}
