//! Dense exact matrices over ℚ(ζ_N).
//!
//! Ranks use fraction-free (Bareiss) elimination with the sparsest
//! available pivot row. Kernels and coordinate solves go through a reduced
//! row echelon form with first-nonzero pivots, so bases come out in the same
//! order on every run.

use std::fmt;

use crate::cyclofield::CyclotomicNumber;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    order: u32,
    rows: usize,
    cols: usize,
    data: Vec<CyclotomicNumber>,
}

impl Matrix {
    pub fn zeros(order: u32, rows: usize, cols: usize) -> Matrix {
        Matrix {
            order,
            rows,
            cols,
            data: vec![CyclotomicNumber::zero(order); rows * cols],
        }
    }

    pub fn identity(order: u32, size: usize) -> Matrix {
        let mut m = Matrix::zeros(order, size, size);
        for i in 0..size {
            m.set(i, i, CyclotomicNumber::one(order));
        }
        m
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(order: u32, rows: usize, columns: &[Vec<CyclotomicNumber>]) -> Matrix {
        let mut m = Matrix::zeros(order, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rows(order: u32, cols: usize, rows: &[Vec<CyclotomicNumber>]) -> Matrix {
        let mut m = Matrix::zeros(order, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has the wrong length");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CyclotomicNumber) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<CyclotomicNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<CyclotomicNumber>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[CyclotomicNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CyclotomicNumber::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.order, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.order, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CyclotomicNumber::zero(self.order), |acc, (a, b)| {
                        &acc + &(a * b)
                    })
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Matrix,
        f: impl Fn(&CyclotomicNumber, &CyclotomicNumber) -> CyclotomicNumber,
    ) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Matrix {
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack: column counts differ");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            order: self.order,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack: row counts differ");
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(self.order, self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Rank by fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<CyclotomicNumber>> =
            (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut prev = CyclotomicNumber::one(self.order);
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == a.len() {
                break;
            }
            let pivot = (rank..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c..].iter().filter(|x| !x.is_zero()).count());
            let Some(pivot) = pivot else { continue };
            a.swap(rank, pivot);
            let (top, bottom) = a.split_at_mut(rank + 1);
            let prow = &top[rank];
            for row in bottom.iter_mut() {
                let lead = row[c].clone();
                for j in c + 1..self.cols {
                    let v = &(&prow[c] * &row[j]) - &(&lead * &prow[j]);
                    row[j] = if v.is_zero() { v } else { &v / &prev };
                }
                row[c] = CyclotomicNumber::zero(self.order);
            }
            prev = prow[c].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel: one vector per free column, with a 1 in
    /// that column and 0 in every other free column.
    pub fn nullspace(&self) -> Vec<Vec<CyclotomicNumber>> {
        let (r, pivots) = self.rref();
        let zero = CyclotomicNumber::zero(self.order);
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![zero.clone(); self.cols];
                v[free] = CyclotomicNumber::one(self.order);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, free);
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = b`, returning `None` when b is outside the column space.
    pub fn solve(&self, b: &[CyclotomicNumber]) -> Option<Vec<CyclotomicNumber>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.order, self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![CyclotomicNumber::zero(self.order); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}x{} over Q(zeta_{})]",
            self.rows, self.cols, self.order
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Picks, in order, the vectors of `candidates` that are independent modulo
/// the column space of `image` and of the earlier picks.
pub fn complement_representatives(
    image: &Matrix,
    candidates: &[Vec<CyclotomicNumber>],
) -> Vec<Vec<CyclotomicNumber>> {
    let mut span = image.clone();
    let mut rank = span.rank();
    let mut picked = Vec::new();
    for v in candidates {
        let extended = span.hstack(&Matrix::from_columns(
            span.order(),
            span.rows(),
            std::slice::from_ref(v),
        ));
        let r = extended.rank();
        if r > rank {
            rank = r;
            span = extended;
            picked.push(v.clone());
        }
    }
    picked
}
