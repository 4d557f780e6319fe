//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! An element is stored as the unique residue of a rational polynomial in ζ
//! modulo the N-th cyclotomic polynomial Φ_N, so equality is coefficient-wise.
//! All coefficients are `BigRational`, which keeps them in lowest terms with a
//! positive denominator.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Dense rational polynomial, coefficients from degree 0 upwards, no trailing zeros.
pub type RationalPoly = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field order mismatch: Q(zeta_{left}) vs Q(zeta_{right})")]
    OrderMismatch { left: u32, right: u32 },
}

fn trim(p: &mut RationalPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> RationalPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> RationalPoly {
    let len = a.len().max(b.len());
    let mut out: RationalPoly = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by the nonzero polynomial `b`.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (RationalPoly, RationalPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: RationalPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().unwrap();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                rem[shift + i] -= &factor * c;
            }
        }
        quot[shift] = factor;
        // the leading coefficient is now exactly zero
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn compute_cyclo_poly(n: u32) -> RationalPoly {
    // x^n - 1
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let (q, r) = poly_divrem(&num, &modulus(d));
        debug_assert!(r.is_empty());
        num = q;
    }
    num
}

fn modulus(n: u32) -> Arc<RationalPoly> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<RationalPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let p = Arc::new(compute_cyclo_poly(n));
    cache.write().unwrap().entry(n).or_insert(p).clone()
}

/// The N-th cyclotomic polynomial Φ_N.
///
/// Panics if `n == 0`.
pub fn cyclo_poly(n: u32) -> RationalPoly {
    assert!(n >= 1, "cyclotomic polynomials are indexed from 1");
    modulus(n).as_ref().clone()
}

/// Degree of Φ_N, i.e. Euler's totient of N.
pub fn cyclo_degree(n: u32) -> usize {
    modulus(n).len() - 1
}

/// An element of ℚ(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    /// Reduces an arbitrary polynomial in ζ_N.
    pub fn from_poly(order: u32, poly: &[BigRational]) -> Self {
        assert!(order >= 1, "field order must be positive");
        let m = modulus(order);
        let (_, mut rem) = poly_divrem(poly, &m);
        rem.resize(m.len() - 1, BigRational::zero());
        CyclotomicNumber { order, coeffs: rem }
    }

    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "field order must be positive");
        CyclotomicNumber {
            order,
            coeffs: vec![BigRational::zero(); cyclo_degree(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u32, q: BigRational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = q;
        out
    }

    pub fn from_int(order: u32, k: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_frac(order: u32, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(
            order,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// ζ_N^k, for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(order, &poly)
    }

    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients on 1, ζ, ..., ζ^{deg Φ_N − 1}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check_order(&self, other: &Self) -> Result<(), FieldError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(FieldError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_order(other)?;
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_order(other)?;
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_order(other)?;
        if self.coeffs.len() == 1 {
            return Ok(CyclotomicNumber {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        trim(&mut a);
        trim(&mut b);
        Ok(Self::from_poly(self.order, &poly_mul(&a, &b)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_order(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.order, q.recip()));
        }
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // invariant: s * self ≡ r (mod Φ_N)
        let mut r0: RationalPoly = modulus(self.order).as_ref().clone();
        let mut r1 = a;
        let mut s0: RationalPoly = Vec::new();
        let mut s1: RationalPoly = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_N is irreducible, so the last nonzero remainder is a nonzero constant.
        let c = r1[0].recip();
        let scaled: RationalPoly = s1.iter().map(|x| x * &c).collect();
        Ok(Self::from_poly(self.order, &scaled))
    }

    /// Image under the automorphism ζ ↦ ζ^{N−1} (complex conjugation).
    pub fn conj(&self) -> Self {
        if self.coeffs.len() == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(i * (n - 1)) % n] += c;
            }
        }
        trim(&mut poly);
        Self::from_poly(self.order, &poly)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Number of nonzero rational coefficients; used to decide when a
    /// printed coefficient needs parentheses.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let zeta = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            match (abs.is_one(), zeta.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{zeta}")?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{zeta}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q(zeta_{})", self, self.order)
    }
}

// Operator sugar. These panic on mismatched orders (and `/` on a zero
// divisor); use the `checked_*` methods where the inputs are untrusted.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ints(p: &[i64]) -> RationalPoly {
        p.iter().map(|&c| q(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclo_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclo_poly(2), ints(&[1, 1]));
        assert_eq!(cyclo_poly(3), ints(&[1, 1, 1]));
        assert_eq!(cyclo_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclo_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclo_poly(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclo_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclo_poly_divides_x_n_minus_one() {
        for n in 1..=24u32 {
            let mut xn = vec![q(0); n as usize + 1];
            xn[0] = q(-1);
            xn[n as usize] = q(1);
            let (_, r) = poly_divrem(&xn, &cyclo_poly(n));
            assert!(r.is_empty(), "Phi_{n} does not divide x^{n} - 1");
        }
        // totients
        let phi: Vec<usize> = (1..=12).map(cyclo_degree).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn zeta3_relations() {
        let z = CyclotomicNumber::zeta(3);
        let one = CyclotomicNumber::one(3);
        let s = &(&(&z * &z) + &z) + &one;
        assert!(s.is_zero());
        assert!((&z * &CyclotomicNumber::zeta_pow(3, 2)).is_one());
        assert!(z.pow(3).is_one());
    }

    #[test]
    fn inverse_of_one_plus_zeta3() {
        let z = CyclotomicNumber::zeta(3);
        let a = &CyclotomicNumber::one(3) + &z;
        let inv = a.inv().unwrap();
        assert_eq!(inv, -&z);
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn conjugation_examples() {
        let i = CyclotomicNumber::zeta(4);
        assert_eq!(i.conj(), -&i);
        let r = CyclotomicNumber::from_frac(5, -3, 7);
        assert_eq!(r.conj(), r);
        let z = CyclotomicNumber::zeta(3);
        let expected = &CyclotomicNumber::from_int(3, -1) - &z;
        assert_eq!(z.conj(), expected);
        assert_eq!(z.conj(), CyclotomicNumber::zeta_pow(3, 2));
    }

    #[test]
    fn errors() {
        let a = CyclotomicNumber::one(3);
        let b = CyclotomicNumber::one(4);
        assert_eq!(
            a.checked_add(&b),
            Err(FieldError::OrderMismatch { left: 3, right: 4 })
        );
        assert_eq!(
            a.checked_div(&CyclotomicNumber::zero(3)),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(
            CyclotomicNumber::zero(6).inv(),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn display() {
        let z = CyclotomicNumber::zeta(3);
        assert_eq!(z.conj().to_string(), "-1 - z");
        assert_eq!(CyclotomicNumber::from_frac(1, 2, 3).to_string(), "2/3");
        let x = &CyclotomicNumber::from_frac(8, -1, 2) + &CyclotomicNumber::zeta_pow(8, 3);
        assert_eq!(x.to_string(), "-1/2 + z^3");
    }

    fn element(order: u32) -> impl Strategy<Value = CyclotomicNumber> {
        let deg = cyclo_degree(order);
        prop::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |cs| {
            let poly: RationalPoly = cs
                .into_iter()
                .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect();
            CyclotomicNumber::from_poly(order, &poly)
        })
    }

    fn triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
        prop_oneof![
            Just(1u32),
            Just(2),
            Just(3),
            Just(4),
            Just(6),
            Just(8),
            Just(12)
        ]
        .prop_flat_map(|n| (element(n), element(n), element(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn inverse_and_conjugation((a, b, _c) in triple()) {
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert_eq!(&(&b / &a) * &a, b.clone());
            }
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }
    }
}
