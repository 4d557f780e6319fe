//! The bigraded exterior algebra on φ¹..φⁿ and φ̄¹..φ̄ⁿ.
//!
//! A [`Monomial`] is a bit set: bit `i-1` is φ^i and bit `16+i-1` is φ̄^i.
//! The canonical order of factors is increasing bit position, so all
//! holomorphic factors precede the antiholomorphic ones and each block is
//! ascending.
//!
//! Conjugation sign convention: `conj(c · φ^I ∧ φ̄^J) = conj(c) · (−1)^{|I||J|} · φ^J ∧ φ̄^I`.
//! This is the sign obtained by moving the |J| holomorphic factors of
//! `φ̄^I ∧ φ^J` past the |I| antiholomorphic ones.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, BitXor, Neg, Sub};

use itertools::Itertools;
use thiserror::Error;

use crate::cyclofield::CyclotomicNumber;

/// Upper bound on the number of holomorphic generators.
pub const MAX_GENERATORS: usize = 16;

const HOLO_MASK: u32 = 0xFFFF;
const ANTI_SHIFT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorCountMismatch { left: usize, right: usize },
}

/// One degree-1 generator, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Holo(usize),
    Anti(usize),
}

impl Generator {
    fn bit(self) -> u32 {
        match self {
            Generator::Holo(i) => 1 << (i - 1),
            Generator::Anti(i) => 1 << (ANTI_SHIFT as usize + i - 1),
        }
    }

    pub fn conjugate(self) -> Generator {
        match self {
            Generator::Holo(i) => Generator::Anti(i),
            Generator::Anti(i) => Generator::Holo(i),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Holo(i) => write!(f, "phi{i}"),
            Generator::Anti(i) => write!(f, "bphi{i}"),
        }
    }
}

/// A canonical wedge monomial φ^I ∧ φ̄^J.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u32);

fn indices(mut bits: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i + 1)
        }
    })
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// Builds φ^I ∧ φ̄^J from 1-based index sets, or `None` if an index
    /// repeats or is out of range.  Index order is irrelevant: the result is
    /// the canonical monomial, without the sorting sign.
    pub fn from_sets(holo: &[usize], anti: &[usize]) -> Option<Monomial> {
        let mut bits = 0u32;
        for &i in holo {
            if i == 0 || i > MAX_GENERATORS {
                return None;
            }
            let b = Generator::Holo(i).bit();
            if bits & b != 0 {
                return None;
            }
            bits |= b;
        }
        for &j in anti {
            if j == 0 || j > MAX_GENERATORS {
                return None;
            }
            let b = Generator::Anti(j).bit();
            if bits & b != 0 {
                return None;
            }
            bits |= b;
        }
        Some(Monomial(bits))
    }

    pub fn generator(g: Generator) -> Monomial {
        Monomial(g.bit())
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn holo_indices(self) -> impl Iterator<Item = usize> {
        indices(self.0 & HOLO_MASK)
    }

    pub fn anti_indices(self) -> impl Iterator<Item = usize> {
        indices(self.0 >> ANTI_SHIFT)
    }

    /// Factors in canonical order.
    pub fn factors(self) -> Vec<Generator> {
        self.holo_indices()
            .map(Generator::Holo)
            .chain(self.anti_indices().map(Generator::Anti))
            .collect()
    }

    pub fn bidegree(self) -> (usize, usize) {
        (
            (self.0 & HOLO_MASK).count_ones() as usize,
            (self.0 >> ANTI_SHIFT).count_ones() as usize,
        )
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Largest generator index used, 0 for the unit.
    pub fn max_index(self) -> usize {
        let h = self.holo_indices().last().unwrap_or(0);
        let a = self.anti_indices().last().unwrap_or(0);
        h.max(a)
    }

    /// `self ∧ other` as a canonical monomial and a sign flag (`true` for −1),
    /// or `None` when a generator repeats.
    pub fn wedge(self, other: Monomial) -> Option<(Monomial, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (x in self, y in other) with x after y in canonical order
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let y = rest.trailing_zeros();
            rest &= rest - 1;
            inversions += (self.0 >> y).count_ones();
        }
        Some((Monomial(self.0 | other.0), inversions % 2 == 1))
    }

    /// Conjugate monomial and the sign (−1)^{|I||J|} as a flag.
    pub fn conjugate(self) -> (Monomial, bool) {
        let holo = self.0 & HOLO_MASK;
        let anti = self.0 >> ANTI_SHIFT;
        let (p, q) = self.bidegree();
        (Monomial(anti | (holo << ANTI_SHIFT)), (p * q) % 2 == 1)
    }

    // total degree, then more holomorphic factors first, then lexicographic
    fn sort_key(self) -> (usize, std::cmp::Reverse<usize>, Vec<usize>, Vec<usize>) {
        let (p, q) = self.bidegree();
        (
            p + q,
            std::cmp::Reverse(p),
            self.holo_indices().collect(),
            self.anti_indices().collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints the shorthand `phi[1 2 ~3]` for φ^{12 3̄}; the unit prints as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts = self
            .holo_indices()
            .map(|i| i.to_string())
            .chain(self.anti_indices().map(|j| format!("~{j}")))
            .join(" ");
        write!(f, "phi[{parts}]")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All monomials of bidegree (p, q) on n generators, holomorphic index set
/// outermost, each block in lexicographic order.
pub fn basis(n: usize, p: usize, q: usize) -> Vec<Monomial> {
    if p > n || q > n {
        return Vec::new();
    }
    let holos: Vec<Vec<usize>> = (1..=n).combinations(p).collect();
    let antis: Vec<Vec<usize>> = (1..=n).combinations(q).collect();
    holos
        .iter()
        .cartesian_product(antis.iter())
        .map(|(i, j)| Monomial::from_sets(i, j).expect("combinations are repetition-free"))
        .collect()
}

/// A linear combination of monomials with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<Monomial, CyclotomicNumber>,
}

impl Form {
    pub fn zero(n: usize) -> Form {
        assert!(n <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators");
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(n: usize, m: Monomial, c: CyclotomicNumber) -> Form {
        assert!(
            m.max_index() <= n,
            "monomial {m} uses a generator beyond {n}"
        );
        let mut f = Form::zero(n);
        f.add_term(m, c);
        f
    }

    pub fn generator(n: usize, g: Generator, order: u32) -> Form {
        Form::monomial(n, Monomial::generator(g), CyclotomicNumber::one(order))
    }

    pub fn constant(n: usize, c: CyclotomicNumber) -> Form {
        Form::monomial(n, Monomial::ONE, c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CyclotomicNumber)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Option<&CyclotomicNumber> {
        self.terms.get(&m)
    }

    /// Field order of the coefficients, if there are any.
    pub fn field_order(&self) -> Option<u32> {
        self.terms.values().next().map(CyclotomicNumber::order)
    }

    pub fn add_term(&mut self, m: Monomial, c: CyclotomicNumber) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Form {
        let mut out = Form::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(*m, a * c);
        }
        out
    }

    /// The common bidegree of all terms, `None` for zero or mixed forms.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|m| m.bidegree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// True when every term has bidegree (p, q); the zero form qualifies.
    pub fn is_bihomogeneous_of(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|m| m.bidegree() == (p, q))
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    pub fn wedge(&self, other: &Form) -> Result<Form, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::GeneratorCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = Form::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.wedge(*mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Complex conjugation; swaps bidegrees (p,q) ↔ (q,p).
    pub fn conjugate(&self) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            let (cm, neg) = m.conjugate();
            let cc = c.conj();
            out.terms.insert(cm, if neg { -cc } else { cc });
        }
        out
    }

    /// Restriction to the terms of bidegree (p, q).
    pub fn component(&self, p: usize, q: usize) -> Form {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree() == (p, q))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    fn combine(&self, other: &Form, negate: bool) -> Form {
        assert_eq!(self.n, other.n, "generator count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, if negate { -c } else { c.clone() });
        }
        out
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, c) = match c.as_rational() {
                Some(r) if r < &num_rational::BigRational::from_integer(0.into()) => (true, -c),
                _ => (false, c.clone()),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = *m == Monomial::ONE;
            if c.is_one() {
                if unit {
                    write!(f, "1")?;
                } else {
                    write!(f, "{m}")?;
                }
            } else {
                let cs = if c.term_count() > 1 {
                    format!("({c})")
                } else {
                    c.to_string()
                };
                if unit {
                    write!(f, "{cs}")?;
                } else {
                    write!(f, "{cs} {m}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.combine(rhs, false)
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.combine(rhs, true)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

/// `a ^ b` is the wedge product; panics on a generator-count mismatch.
impl BitXor for &Form {
    type Output = Form;
    fn bitxor(self, rhs: &Form) -> Form {
        self.wedge(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const N: usize = 3;

    fn phi(i: usize) -> Form {
        Form::generator(N, Generator::Holo(i), 3)
    }

    fn bphi(i: usize) -> Form {
        Form::generator(N, Generator::Anti(i), 3)
    }

    fn mono(h: &[usize], a: &[usize]) -> Monomial {
        Monomial::from_sets(h, a).unwrap()
    }

    fn c(k: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_int(3, k)
    }

    #[test]
    fn wedge_examples() {
        assert!((&phi(1) ^ &phi(1)).is_zero());
        assert_eq!(
            &phi(2) ^ &phi(1),
            Form::monomial(N, mono(&[1, 2], &[]), c(-1))
        );
        // φ¹∧φ̄¹∧φ²∧φ̄²: moving φ² past φ̄¹ costs one sign
        let left = &phi(1) ^ &bphi(1);
        let right = &phi(2) ^ &bphi(2);
        assert_eq!(
            &left ^ &right,
            Form::monomial(N, mono(&[1, 2], &[1, 2]), c(-1))
        );
    }

    #[test]
    fn generator_count_mismatch() {
        let a = Form::generator(2, Generator::Holo(1), 1);
        let b = Form::generator(3, Generator::Holo(2), 1);
        assert_eq!(
            a.wedge(&b),
            Err(ExteriorError::GeneratorCountMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(phi(1).conjugate(), bphi(1));
        let z = CyclotomicNumber::zeta(3);
        let x = Form::monomial(N, mono(&[1], &[1]), z.clone());
        assert_eq!(
            x.conjugate(),
            Form::monomial(N, mono(&[1], &[1]), -z.conj())
        );
        // φ^{12 3̄} ↦ φ^{3 1̄2̄} with (−1)^{2·1} = +1
        let y = Form::monomial(N, mono(&[1, 2], &[3]), c(1));
        assert_eq!(y.conjugate(), Form::monomial(N, mono(&[3], &[1, 2]), c(1)));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis(3, 0, 0), vec![Monomial::ONE]);
        let b11 = basis(3, 1, 1);
        assert_eq!(b11.len(), 9);
        assert_eq!(b11[0], mono(&[1], &[1]));
        assert_eq!(b11[1], mono(&[1], &[2]));
        assert_eq!(b11[3], mono(&[2], &[1]));
        assert_eq!(basis(3, 3, 3), vec![mono(&[1, 2, 3], &[1, 2, 3])]);
        for p in 0..=4 {
            for q in 0..=4 {
                let b = basis(4, p, q);
                let binom = |k: usize| (1..=k).fold(1usize, |acc, i| acc * (4 - i + 1) / i);
                assert_eq!(b.len(), binom(p) * binom(q));
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert!(basis(3, 4, 0).is_empty());
    }

    #[test]
    fn display_shorthand() {
        assert_eq!(mono(&[1, 2], &[3]).to_string(), "phi[1 2 ~3]");
        let f = &Form::monomial(N, mono(&[1, 2], &[3]), c(1))
            - &Form::monomial(N, mono(&[3], &[1, 2]), c(1));
        assert_eq!(f.to_string(), "phi[1 2 ~3] - phi[3 ~1 ~2]");
        assert_eq!(Form::zero(3).to_string(), "0");
    }

    fn coefficient() -> impl Strategy<Value = CyclotomicNumber> {
        (-3i64..=3, 0i64..3).prop_map(|(a, k)| {
            &CyclotomicNumber::from_int(3, a) * &CyclotomicNumber::zeta_pow(3, k)
        })
    }

    fn homogeneous_form(n: usize) -> impl Strategy<Value = Form> {
        (0..=n, 0..=n).prop_flat_map(move |(p, q)| {
            let b = basis(n, p, q);
            let len = b.len();
            prop::collection::vec(coefficient(), len).prop_map(move |cs| {
                let mut f = Form::zero(n);
                for (m, c) in b.iter().zip(cs) {
                    f.add_term(*m, c);
                }
                f
            })
        })
    }

    proptest! {
        #[test]
        fn graded_commutative(a in homogeneous_form(3), b in homogeneous_form(3)) {
            let da = a.terms().next().map(|(m, _)| m.degree()).unwrap_or(0);
            let db = b.terms().next().map(|(m, _)| m.degree()).unwrap_or(0);
            let ab = &a ^ &b;
            let ba = &b ^ &a;
            if (da * db) % 2 == 0 {
                prop_assert_eq!(ab, ba);
            } else {
                prop_assert_eq!(ab, -&ba);
            }
        }

        #[test]
        fn associative(a in homogeneous_form(3), b in homogeneous_form(3), c in homogeneous_form(3)) {
            prop_assert_eq!(&(&a ^ &b) ^ &c, &a ^ &(&b ^ &c));
        }

        #[test]
        fn conjugation_is_multiplicative_involution(a in homogeneous_form(3), b in homogeneous_form(3)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a ^ &b).conjugate(), &a.conjugate() ^ &b.conjugate());
            if let Some((p, q)) = a.bidegree() {
                prop_assert_eq!(a.conjugate().bidegree(), Some((q, p)));
            }
        }
    }
}
