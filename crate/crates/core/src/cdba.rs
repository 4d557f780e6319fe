//! Complex differential bigraded algebras given by structure equations.
//!
//! Only ∂φ^i and ∂̄φ^i on holomorphic generators are supplied. The barred
//! equations are forced: ∂φ̄^i = conj(∂̄φ^i) and ∂̄φ̄^i = conj(∂φ^i).

use thiserror::Error;

use crate::bicomplex::FiniteBicomplex;
use crate::cyclofield::CyclotomicNumber;
use crate::exterior::{basis, Form, Generator, Monomial, MAX_GENERATORS};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdbaError {
    #[error("{operator}{generator} = {value} must have bidegree {expected:?}")]
    BadBidegree {
        operator: &'static str,
        generator: Generator,
        expected: (usize, usize),
        value: Form,
    },
    #[error("{identity} fails on {generator}: residual {residual}")]
    IntegrabilityFailure {
        identity: &'static str,
        generator: Generator,
        residual: Form,
    },
    #[error("expected {expected} structure equations, got {found}")]
    GeneratorCountMismatch { expected: usize, found: usize },
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("coefficient field mismatch in {generator}: expected Q(zeta_{expected}), found Q(zeta_{found})")]
    OrderMismatch {
        generator: Generator,
        expected: u32,
        found: u32,
    },
    #[error("form {0} is not bihomogeneous")]
    NonHomogeneousInput(Form),
}

/// A validated complex differential bigraded algebra on n generators.
#[derive(Debug, Clone)]
pub struct Cdba {
    n: usize,
    order: u32,
    del_gen: Vec<Form>,
    delbar_gen: Vec<Form>,
    // values on all 2n generators, holomorphic first
    del_all: Vec<Form>,
    delbar_all: Vec<Form>,
}

impl Cdba {
    /// Validates the structure equations eagerly: bidegrees, coefficient
    /// field, and ∂² = ∂̄² = ∂∂̄ + ∂̄∂ = 0 on every generator.
    pub fn new(
        n: usize,
        order: u32,
        del_gen: Vec<Form>,
        delbar_gen: Vec<Form>,
    ) -> Result<Cdba, CdbaError> {
        if n > MAX_GENERATORS {
            return Err(CdbaError::TooManyGenerators(n));
        }
        for eqs in [&del_gen, &delbar_gen] {
            if eqs.len() != n {
                return Err(CdbaError::GeneratorCountMismatch {
                    expected: n,
                    found: eqs.len(),
                });
            }
        }
        for (i, (d, db)) in del_gen.iter().zip(&delbar_gen).enumerate() {
            let generator = Generator::Holo(i + 1);
            for (operator, value, expected) in [("del ", d, (2, 0)), ("delbar ", db, (1, 1))] {
                if value.n() != n || !value.is_bihomogeneous_of(expected.0, expected.1) {
                    return Err(CdbaError::BadBidegree {
                        operator,
                        generator,
                        expected,
                        value: value.clone(),
                    });
                }
                if let Some(found) = value.field_order().filter(|&o| o != order) {
                    return Err(CdbaError::OrderMismatch {
                        generator,
                        expected: order,
                        found,
                    });
                }
            }
        }
        let del_all = del_gen
            .iter()
            .cloned()
            .chain(delbar_gen.iter().map(Form::conjugate))
            .collect();
        let delbar_all = delbar_gen
            .iter()
            .cloned()
            .chain(del_gen.iter().map(Form::conjugate))
            .collect();
        let cdba = Cdba {
            n,
            order,
            del_gen,
            delbar_gen,
            del_all,
            delbar_all,
        };
        cdba.check_integrability()?;
        Ok(cdba)
    }

    /// The complex torus model: every structure equation is zero.
    pub fn torus(n: usize, order: u32) -> Cdba {
        Cdba::new(n, order, vec![Form::zero(n); n], vec![Form::zero(n); n])
            .expect("zero structure equations are integrable")
    }

    fn check_integrability(&self) -> Result<(), CdbaError> {
        let gens = (1..=self.n)
            .map(Generator::Holo)
            .chain((1..=self.n).map(Generator::Anti));
        for g in gens {
            let dg = self.generator_value(g, false);
            let dbg = self.generator_value(g, true);
            let checks = [
                ("del^2 = 0", self.derive(&dg, false)),
                ("delbar^2 = 0", self.derive(&dbg, true)),
                (
                    "del delbar + delbar del = 0",
                    &self.derive(&dbg, false) + &self.derive(&dg, true),
                ),
            ];
            for (identity, residual) in checks {
                if !residual.is_zero() {
                    return Err(CdbaError::IntegrabilityFailure {
                        identity,
                        generator: g,
                        residual,
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

    /// ∂φ^i for the holomorphic generators.
    pub fn del_equations(&self) -> &[Form] {
        &self.del_gen
    }

    /// ∂̄φ^i for the holomorphic generators.
    pub fn delbar_equations(&self) -> &[Form] {
        &self.delbar_gen
    }

    fn generator_value(&self, g: Generator, bar: bool) -> Form {
        let table = if bar { &self.delbar_all } else { &self.del_all };
        match g {
            Generator::Holo(i) => table[i - 1].clone(),
            Generator::Anti(i) => table[self.n + i - 1].clone(),
        }
    }

    fn generator_ref(&self, g: Generator, bar: bool) -> &Form {
        let table = if bar { &self.delbar_all } else { &self.del_all };
        match g {
            Generator::Holo(i) => &table[i - 1],
            Generator::Anti(i) => &table[self.n + i - 1],
        }
    }

    /// Graded Leibniz extension to one monomial.
    fn derive_monomial(&self, m: Monomial, bar: bool, out: &mut Form, coeff: &CyclotomicNumber) {
        let factors = m.factors();
        for (k, &g) in factors.iter().enumerate() {
            let value = self.generator_ref(g, bar);
            if value.is_zero() {
                continue;
            }
            let prefix = Monomial::from_sets(
                &factors[..k]
                    .iter()
                    .filter_map(holo_index)
                    .collect::<Vec<_>>(),
                &factors[..k]
                    .iter()
                    .filter_map(anti_index)
                    .collect::<Vec<_>>(),
            )
            .expect("sub-monomial");
            let suffix = Monomial::from_sets(
                &factors[k + 1..]
                    .iter()
                    .filter_map(holo_index)
                    .collect::<Vec<_>>(),
                &factors[k + 1..]
                    .iter()
                    .filter_map(anti_index)
                    .collect::<Vec<_>>(),
            )
            .expect("sub-monomial");
            let leibniz_neg = k % 2 == 1;
            for (t, c) in value.terms() {
                let Some((left, neg1)) = prefix.wedge(*t) else {
                    continue;
                };
                let Some((full, neg2)) = left.wedge(suffix) else {
                    continue;
                };
                let c = c * coeff;
                let negative = leibniz_neg ^ neg1 ^ neg2;
                out.add_term(full, if negative { -c } else { c });
            }
        }
    }

    fn derive(&self, f: &Form, bar: bool) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in f.terms() {
            self.derive_monomial(*m, bar, &mut out, c);
        }
        out
    }

    /// ∂f for a bihomogeneous form f.
    pub fn apply_del(&self, f: &Form) -> Result<Form, CdbaError> {
        self.check_input(f)?;
        Ok(self.derive(f, false))
    }

    /// ∂̄f for a bihomogeneous form f.
    pub fn apply_delbar(&self, f: &Form) -> Result<Form, CdbaError> {
        self.check_input(f)?;
        Ok(self.derive(f, true))
    }

    /// d = ∂ + ∂̄, formed on demand.
    pub fn apply_d(&self, f: &Form) -> Result<Form, CdbaError> {
        Ok(&self.apply_del(f)? + &self.apply_delbar(f)?)
    }

    fn check_input(&self, f: &Form) -> Result<(), CdbaError> {
        if f.n() != self.n || !f.is_bihomogeneous() {
            return Err(CdbaError::NonHomogeneousInput(f.clone()));
        }
        Ok(())
    }

    /// Matrices of ∂ and ∂̄ in the monomial bases of every bidegree.
    pub fn compile(&self) -> FiniteBicomplex {
        let n = self.n;
        let order = self.order;
        let bases: Vec<Vec<Vec<Monomial>>> = (0..=n)
            .map(|p| (0..=n).map(|q| basis(n, p, q)).collect())
            .collect();
        let matrix = |p: usize, q: usize, bar: bool| -> Matrix {
            let source = &bases[p][q];
            let (tp, tq) = if bar { (p, q + 1) } else { (p + 1, q) };
            let target: &[Monomial] = if tp <= n && tq <= n {
                &bases[tp][tq]
            } else {
                &[]
            };
            let mut m = Matrix::zeros(order, target.len(), source.len());
            if target.is_empty() {
                return m;
            }
            for (j, mono) in source.iter().enumerate() {
                let mut image = Form::zero(n);
                self.derive_monomial(*mono, bar, &mut image, &CyclotomicNumber::one(order));
                for (t, c) in image.terms() {
                    let i = target
                        .binary_search(t)
                        .expect("derivation preserves the target bidegree");
                    m.set(i, j, c.clone());
                }
            }
            m
        };
        let del = (0..=n)
            .map(|p| (0..=n).map(|q| matrix(p, q, false)).collect())
            .collect();
        let delbar = (0..=n)
            .map(|p| (0..=n).map(|q| matrix(p, q, true)).collect())
            .collect();
        let basis_forms = bases
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| {
                        b.iter()
                            .map(|m| Form::monomial(n, *m, CyclotomicNumber::one(order)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FiniteBicomplex::new(n, order, basis_forms, del, delbar)
            .expect("a validated CDBA compiles to a valid bicomplex")
    }
}

fn holo_index(g: &Generator) -> Option<usize> {
    match g {
        Generator::Holo(i) => Some(*i),
        Generator::Anti(_) => None,
    }
}

fn anti_index(g: &Generator) -> Option<usize> {
    match g {
        Generator::Anti(j) => Some(*j),
        Generator::Holo(_) => None,
    }
}
