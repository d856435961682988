use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

use super::GeometryError;

/// Exponent vector of a monomial, ordered graded-lexicographically with
/// `X0 > X1 > ... > Xn`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| {
            Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        self.0
            .iter()
            .zip(point)
            .fold(S::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
    }

    /// All monomials of total degree `degree` in `nvars` variables, in
    /// descending graded-lex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        if nvars == 0 {
            return if degree == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "X{i}")?;
            } else {
                write!(f, "X{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with coefficients in `S`.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration is in
/// ascending graded-lex order and the leading term is the last entry. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::var(nvars, i), S::one())])
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    ///
    /// Panics if a monomial has the wrong number of variables.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())),
        )
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &S) -> Self {
        Polynomial::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.clone() * c.clone())),
        )
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c.clone() * S::from_i64(i64::from(k)))
            }),
        )
    }

    pub fn eval(&self, point: &[S]) -> Result<S, GeometryError> {
        if point.len() != self.nvars {
            return Err(GeometryError::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(S::zero(), |acc, (m, c)| acc + c.clone() * m.eval(point)))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Substitutes `value` for variable `i` and removes that variable.
    pub fn substitute_remove(&self, i: usize, value: &S) -> Polynomial<S> {
        assert!(i < self.nvars, "variable index out of range");
        Polynomial::from_terms(
            self.nvars - 1,
            self.terms.iter().map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e.remove(i);
                (Monomial(e), c.clone() * num_traits::pow(value.clone(), k as usize))
            }),
        )
    }

    /// Multivariate division by a single divisor in graded-lex order.
    ///
    /// Returns `(q, r)` with `self = q * divisor + r` and no term of `r`
    /// divisible by the leading monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Polynomial<S>) -> (Polynomial<S>, Polynomial<S>) {
        assert_eq!(self.nvars, divisor.nvars, "arity mismatch");
        let (lm, lc) = divisor.leading_term().expect("division by zero polynomial");
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rest = self.clone();
        let mut quotient = Polynomial::zero(self.nvars);
        let mut remainder = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            match lm.quotient_of(&m) {
                Some(q_mono) => {
                    let q_coeff = c / lc.clone();
                    rest = &rest - &divisor.mul_monomial(&q_mono, &q_coeff);
                    quotient.add_term(q_mono, q_coeff);
                }
                None => {
                    rest.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        (quotient, remainder)
    }
}

impl<'a, S: Scalar> Add<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: &'a Polynomial<S>) -> Polynomial<S> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: &'a Polynomial<S>) -> Polynomial<S> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: &'a Polynomial<S>) -> Polynomial<S> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        self.map_coeffs(|c| -c.clone())
    }
}

/// Homogeneous polynomial of a fixed degree in `n + 1` variables.
///
/// The zero polynomial is homogeneous of every degree and is allowed; it
/// carries the degree it was declared with.
#[derive(Clone, PartialEq, Debug)]
pub struct HomogeneousPolynomial<S> {
    poly: Polynomial<S>,
    degree: u32,
}

impl<S: Scalar> HomogeneousPolynomial<S> {
    pub fn new(poly: Polynomial<S>) -> Result<Self, GeometryError> {
        if !poly.is_homogeneous() {
            return Err(GeometryError::NotHomogeneous);
        }
        let degree = poly.degree().unwrap_or(0);
        Ok(HomogeneousPolynomial { poly, degree })
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogeneousPolynomial { poly: Polynomial::zero(nvars), degree }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        Self::new(Polynomial::from_terms(nvars, terms))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        HomogeneousPolynomial { poly: Polynomial::var(nvars, i), degree: 1 }
    }

    pub fn as_poly(&self) -> &Polynomial<S> {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial<S> {
        self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, point: &[S]) -> Result<S, GeometryError> {
        self.poly.eval(point)
    }

    /// `∂f/∂X_i`, homogeneous of degree `deg f - 1` (or zero).
    pub fn derivative(&self, i: usize) -> HomogeneousPolynomial<S> {
        HomogeneousPolynomial {
            poly: self.poly.derivative(i),
            degree: self.degree.saturating_sub(1),
        }
    }

    pub fn mul(&self, other: &HomogeneousPolynomial<S>) -> HomogeneousPolynomial<S> {
        HomogeneousPolynomial {
            poly: &self.poly * &other.poly,
            degree: self.degree + other.degree,
        }
    }

    /// Sum of two forms of equal degree.
    pub fn try_add(&self, other: &HomogeneousPolynomial<S>) -> Result<Self, GeometryError> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(GeometryError::NotHomogeneous);
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(HomogeneousPolynomial { poly: &self.poly + &other.poly, degree })
    }

    pub fn scale(&self, c: &S) -> Self {
        HomogeneousPolynomial { poly: self.poly.scale(c), degree: self.degree }
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HomogeneousPolynomial<T> {
        HomogeneousPolynomial { poly: self.poly.map_coeffs(f), degree: self.degree }
    }

    /// Restriction to the affine chart `X_i = 1`, a polynomial in the
    /// remaining `n` variables (in their original order).
    pub fn dehomogenize(&self, i: usize) -> Result<Polynomial<S>, GeometryError> {
        if i >= self.nvars() {
            return Err(GeometryError::IndexOutOfRange { index: i, len: self.nvars() });
        }
        Ok(self.poly.substitute_remove(i, &S::one()))
    }

    /// Whether `self` divides `f` exactly.
    ///
    /// Division by a single divisor leaves a zero remainder iff the divisor
    /// divides, so this is a complete principal-ideal membership test.
    pub fn divides(&self, f: &HomogeneousPolynomial<S>) -> bool {
        assert!(!self.is_zero(), "divisor must be nonzero");
        let (_, r) = f.poly.div_rem(&self.poly);
        r.is_zero()
    }
}
