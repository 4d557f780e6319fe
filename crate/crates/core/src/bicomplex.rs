//! Finite double complexes with explicit bases and exact matrices.

use std::collections::HashMap;

use thiserror::Error;

use crate::cyclofield::CyclotomicNumber;
use crate::exterior::{Form, Monomial};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicomplexError {
    #[error("{what} at ({p},{q}) has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        what: &'static str,
        p: usize,
        q: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("{identity} fails at ({p},{q})")]
    NotADifferential {
        identity: &'static str,
        p: usize,
        q: usize,
    },
}

/// `(∧^{•,•}, ∂, ∂̄)` truncated to bidegrees 0 ≤ p, q ≤ n.
///
/// `del[p][q]` maps (p,q) → (p+1,q) and `delbar[p][q]` maps (p,q) → (p,q+1);
/// columns are source basis vectors. Matrices whose target lies outside the
/// grid have zero rows.
#[derive(Debug, Clone)]
pub struct FiniteBicomplex {
    n: usize,
    order: u32,
    basis: Vec<Vec<Vec<Form>>>,
    del: Vec<Vec<Matrix>>,
    delbar: Vec<Vec<Matrix>>,
    // set when every basis element of (p,q) is a distinct monomial with coefficient 1
    monomial_index: Vec<Vec<Option<HashMap<Monomial, usize>>>>,
}

impl FiniteBicomplex {
    pub fn new(
        n: usize,
        order: u32,
        basis: Vec<Vec<Vec<Form>>>,
        del: Vec<Vec<Matrix>>,
        delbar: Vec<Vec<Matrix>>,
    ) -> Result<FiniteBicomplex, BicomplexError> {
        let dim = |p: usize, q: usize| -> usize {
            if p <= n && q <= n {
                basis[p][q].len()
            } else {
                0
            }
        };
        for p in 0..=n {
            for q in 0..=n {
                for (what, m, target) in [
                    ("del", &del[p][q], dim(p + 1, q)),
                    ("delbar", &delbar[p][q], dim(p, q + 1)),
                ] {
                    let expected = (target, dim(p, q));
                    let found = (m.rows(), m.cols());
                    if expected != found {
                        return Err(BicomplexError::ShapeMismatch {
                            what,
                            p,
                            q,
                            expected,
                            found,
                        });
                    }
                }
            }
        }
        let monomial_index = basis
            .iter()
            .map(|row| row.iter().map(|b| monomial_lookup(b)).collect())
            .collect();
        let bc = FiniteBicomplex {
            n,
            order,
            basis,
            del,
            delbar,
            monomial_index,
        };
        bc.check_identities()?;
        Ok(bc)
    }

    fn check_identities(&self) -> Result<(), BicomplexError> {
        for p in 0..=self.n {
            for q in 0..=self.n {
                let dd = self.del(p + 1, q).mul(self.del_ref(p, q));
                if !dd.is_zero() {
                    return Err(BicomplexError::NotADifferential {
                        identity: "del del = 0",
                        p,
                        q,
                    });
                }
                let bb = self.delbar(p, q + 1).mul(self.delbar_ref(p, q));
                if !bb.is_zero() {
                    return Err(BicomplexError::NotADifferential {
                        identity: "delbar delbar = 0",
                        p,
                        q,
                    });
                }
                let anti = self
                    .del(p, q + 1)
                    .mul(self.delbar_ref(p, q))
                    .add(&self.delbar(p + 1, q).mul(self.del_ref(p, q)));
                if !anti.is_zero() {
                    return Err(BicomplexError::NotADifferential {
                        identity: "del delbar + delbar del = 0",
                        p,
                        q,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field_order(&self) -> u32 {
        self.order
    }

    fn in_range(&self, p: isize, q: isize) -> bool {
        p >= 0 && q >= 0 && p as usize <= self.n && q as usize <= self.n
    }

    /// Dimension of the (p,q) component; zero outside the grid.
    pub fn dim(&self, p: isize, q: isize) -> usize {
        if self.in_range(p, q) {
            self.basis[p as usize][q as usize].len()
        } else {
            0
        }
    }

    pub fn basis(&self, p: usize, q: usize) -> &[Form] {
        if p <= self.n && q <= self.n {
            &self.basis[p][q]
        } else {
            &[]
        }
    }

    fn del_ref(&self, p: usize, q: usize) -> &Matrix {
        &self.del[p][q]
    }

    fn delbar_ref(&self, p: usize, q: usize) -> &Matrix {
        &self.delbar[p][q]
    }

    /// ∂: (p,q) → (p+1,q).
    pub fn del(&self, p: usize, q: usize) -> Matrix {
        self.del_at(p as isize, q as isize)
    }

    /// ∂̄: (p,q) → (p,q+1).
    pub fn delbar(&self, p: usize, q: usize) -> Matrix {
        self.delbar_at(p as isize, q as isize)
    }

    /// ∂ with signed indices; empty when the source is outside the grid.
    pub fn del_at(&self, p: isize, q: isize) -> Matrix {
        if self.in_range(p, q) {
            self.del[p as usize][q as usize].clone()
        } else {
            Matrix::zeros(self.order, self.dim(p + 1, q), 0)
        }
    }

    pub fn delbar_at(&self, p: isize, q: isize) -> Matrix {
        if self.in_range(p, q) {
            self.delbar[p as usize][q as usize].clone()
        } else {
            Matrix::zeros(self.order, self.dim(p, q + 1), 0)
        }
    }

    /// ∂∂̄: (p,q) → (p+1,q+1).
    pub fn ddbar_at(&self, p: isize, q: isize) -> Matrix {
        self.del_at(p, q + 1).mul(&self.delbar_at(p, q))
    }

    /// Expands coordinates in the (p,q) basis into a form.
    pub fn form_at(&self, p: usize, q: usize, coords: &[CyclotomicNumber]) -> Form {
        let basis = self.basis(p, q);
        assert_eq!(
            coords.len(),
            basis.len(),
            "coordinate count mismatch at ({p},{q})"
        );
        let mut out = Form::zero(self.n);
        for (b, c) in basis.iter().zip(coords) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }

    /// Coordinates of `f` in the (p,q) basis, or `None` if f is not in its span.
    pub fn coordinates(&self, p: usize, q: usize, f: &Form) -> Option<Vec<CyclotomicNumber>> {
        let basis = self.basis(p, q);
        if let Some(Some(index)) = self.monomial_index.get(p).and_then(|r| r.get(q)) {
            let mut coords = vec![CyclotomicNumber::zero(self.order); basis.len()];
            for (m, c) in f.terms() {
                coords[*index.get(m)?] = c.clone();
            }
            return Some(coords);
        }
        // general basis: solve over the ambient monomials
        let mut monomials: Vec<Monomial> = basis
            .iter()
            .flat_map(|b| b.terms().map(|(m, _)| *m))
            .chain(f.terms().map(|(m, _)| *m))
            .collect();
        monomials.sort();
        monomials.dedup();
        let zero = CyclotomicNumber::zero(self.order);
        let column = |g: &Form| -> Vec<CyclotomicNumber> {
            monomials
                .iter()
                .map(|m| g.coefficient(*m).cloned().unwrap_or_else(|| zero.clone()))
                .collect()
        };
        let cols: Vec<Vec<CyclotomicNumber>> = basis.iter().map(column).collect();
        let a = Matrix::from_columns(self.order, monomials.len(), &cols);
        a.solve(&column(f))
    }

    /// Bidegrees making up Tot^k, in increasing p.
    pub fn total_blocks(&self, k: usize) -> Vec<(usize, usize)> {
        (0..=self.n)
            .filter(|&p| k >= p && k - p <= self.n)
            .map(|p| (p, k - p))
            .collect()
    }

    pub fn total_dim(&self, k: usize) -> usize {
        self.total_blocks(k)
            .iter()
            .map(|&(p, q)| self.dim(p as isize, q as isize))
            .sum()
    }

    /// Offset of the (p,q) block inside Tot^{p+q}.
    pub fn total_offset(&self, p: usize, q: usize) -> usize {
        self.total_blocks(p + q)
            .iter()
            .take_while(|&&(pp, _)| pp < p)
            .map(|&(pp, qq)| self.dim(pp as isize, qq as isize))
            .sum()
    }

    /// d = ∂ + ∂̄ : Tot^k → Tot^{k+1}. Empty for k < 0.
    pub fn total_differential(&self, k: isize) -> Matrix {
        if k < 0 {
            return Matrix::zeros(self.order, self.total_dim(0), 0);
        }
        let k = k as usize;
        let mut d = Matrix::zeros(self.order, self.total_dim(k + 1), self.total_dim(k));
        for (p, q) in self.total_blocks(k) {
            let col = self.total_offset(p, q);
            if p < self.n {
                d.set_block(self.total_offset(p + 1, q), col, self.del_ref(p, q));
            }
            if q < self.n {
                d.set_block(self.total_offset(p, q + 1), col, self.delbar_ref(p, q));
            }
        }
        d
    }

    /// Expands a Tot^k coordinate vector into a form.
    pub fn total_form(&self, k: usize, coords: &[CyclotomicNumber]) -> Form {
        let mut out = Form::zero(self.n);
        for (p, q) in self.total_blocks(k) {
            let off = self.total_offset(p, q);
            let dim = self.dim(p as isize, q as isize);
            out = &out + &self.form_at(p, q, &coords[off..off + dim]);
        }
        out
    }
}

fn monomial_lookup(basis: &[Form]) -> Option<HashMap<Monomial, usize>> {
    let mut index = HashMap::with_capacity(basis.len());
    for (i, b) in basis.iter().enumerate() {
        let mut terms = b.terms();
        let (m, c) = terms.next()?;
        if terms.next().is_some() || !c.is_one() || index.insert(*m, i).is_some() {
            return None;
        }
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdba::tests::{iwasawa, nakamura};

    #[test]
    fn total_complex_layout() {
        let bc = nakamura().compile();
        assert_eq!(bc.total_blocks(0), vec![(0, 0)]);
        assert_eq!(bc.total_blocks(4), vec![(1, 3), (2, 2), (3, 1)]);
        let dims: Vec<usize> = (0..=6).map(|k| bc.total_dim(k)).collect();
        assert_eq!(dims, vec![1, 6, 15, 20, 15, 6, 1]);
        assert_eq!(bc.total_offset(2, 1), bc.dim(0, 3) + bc.dim(1, 2));
        for k in 0..6 {
            let d1 = bc.total_differential(k + 1);
            let d0 = bc.total_differential(k);
            assert!(d1.mul(&d0).is_zero());
        }
        assert_eq!(bc.total_differential(-1).cols(), 0);
    }

    #[test]
    fn degenerate_bidegrees_are_empty() {
        let bc = iwasawa().compile();
        assert_eq!(bc.dim(-1, 0), 0);
        assert_eq!(bc.dim(4, 0), 0);
        let m = bc.del_at(-1, 2);
        assert_eq!((m.rows(), m.cols()), (3, 0));
        assert_eq!(bc.ddbar_at(-1, -1).cols(), 0);
        let top = bc.del(3, 1);
        assert_eq!((top.rows(), top.cols()), (0, 3));
    }

    #[test]
    fn rejects_non_differential() {
        // a 1-dimensional complex in bidegrees (0,0) and (1,0), plus (2,0),
        // with ∂ nonzero twice in a row
        let one = CyclotomicNumber::one(1);
        let n = 2;
        let mut basis = vec![vec![Vec::new(); 3]; 3];
        for row in basis.iter_mut() {
            row[0] = vec![Form::zero(n)];
        }
        let mut del = vec![vec![Matrix::zeros(1, 0, 0); 3]; 3];
        let mut delbar = vec![vec![Matrix::zeros(1, 0, 0); 3]; 3];
        for p in 0..3 {
            for q in 0..3 {
                let src = basis[p][q].len();
                let tgt = if p < 2 { basis[p + 1][q].len() } else { 0 };
                del[p][q] = Matrix::zeros(1, tgt, src);
                let tgt = if q < 2 { basis[p][q + 1].len() } else { 0 };
                delbar[p][q] = Matrix::zeros(1, tgt, src);
            }
        }
        del[0][0].set(0, 0, one.clone());
        del[1][0].set(0, 0, one);
        let err = FiniteBicomplex::new(n, 1, basis, del, delbar).unwrap_err();
        assert!(matches!(
            err,
            BicomplexError::NotADifferential { p: 0, q: 0, .. }
        ));
    }

    #[test]
    fn coordinates_round_trip() {
        let bc = nakamura().compile();
        let coords: Vec<CyclotomicNumber> = (0..9)
            .map(|i| CyclotomicNumber::from_int(2, i as i64 - 4))
            .collect();
        let f = bc.form_at(1, 1, &coords);
        assert_eq!(bc.coordinates(1, 1, &f), Some(coords));
        assert_eq!(bc.coordinates(2, 0, &f), None);
    }
}
