//! Deliberately naive dense Gaussian elimination, kept separate from
//! [`crate::linalg`] so engine ranks can be cross-checked against it.

use crate::cyclofield::CyclotomicNumber;
use crate::linalg::Matrix;

/// Rank of a row-major dense matrix by textbook row reduction.
#[allow(clippy::needless_range_loop)]
pub fn naive_rank(rows: &[Vec<CyclotomicNumber>]) -> usize {
    let mut a: Vec<Vec<CyclotomicNumber>> = rows.to_vec();
    let height = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..height).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in 0..height {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[rank][col];
                for c in col..width {
                    let v = &a[r][c] - &(&factor * &a[rank][c]);
                    a[r][c] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_matrix_rank(m: &Matrix) -> usize {
    let rows: Vec<Vec<CyclotomicNumber>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    naive_rank(&rows)
}
