//! Text format for rational polynomials and projective points.
//!
//! Polynomials are written as signed terms `c * X0^a0 X1^a1 ...` joined by
//! `+` / `-`; coefficients are integers, `p/q` fractions or finite decimals.
//! A coefficient of one and exponents of one may be omitted. Points are
//! written `(a0 : a1 : ... : an)`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{parse_rational, Rational};

use super::poly::{HomogeneousPolynomial, Monomial, Polynomial};
use super::point::ProjPoint;
use super::GeometryError;

pub(crate) fn write_polynomial(
    f: &mut fmt::Formatter<'_>,
    p: &Polynomial<Rational>,
) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (idx, (mono, coeff)) in p.terms().rev().enumerate() {
        let negative = coeff.is_negative();
        let abs = coeff.abs();
        match (idx, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let is_const = mono.degree() == 0;
        if is_const {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{abs} * {mono}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_polynomial(f, self)
    }
}

impl fmt::Display for HomogeneousPolynomial<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_polynomial(f, self.as_poly())
    }
}

impl fmt::Display for ProjPoint<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(" : ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Parses a polynomial. With `nvars = None` the arity is one more than the
/// largest variable index that appears.
pub fn parse_polynomial(
    text: &str,
    nvars: Option<usize>,
) -> Result<Polynomial<Rational>, GeometryError> {
    let err = |msg: &str| GeometryError::Parse(format!("{msg} in {text:?}"));
    let mut terms: Vec<(Vec<(usize, u32)>, Rational)> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err(err("empty polynomial"));
    }
    let mut first = true;
    while pos < chars.len() {
        skip_ws(&mut pos);
        let mut negative = false;
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            negative = chars[pos] == '-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err("expected '+' or '-' between terms"));
        }
        first = false;
        // coefficient
        let start = pos;
        while pos < chars.len() && (chars[pos].is_ascii_digit() || matches!(chars[pos], '.' | '/' | 'e' | 'E'))
        {
            // an exponent marker must be followed by a digit or sign to count
            if matches!(chars[pos], 'e' | 'E') && pos == start {
                break;
            }
            pos += 1;
        }
        let coeff_text: String = chars[start..pos].iter().collect();
        let mut coeff = if coeff_text.is_empty() {
            Rational::one()
        } else {
            parse_rational(&coeff_text).ok_or_else(|| err("bad coefficient"))?
        };
        if negative {
            coeff = -coeff;
        }
        skip_ws(&mut pos);
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
            skip_ws(&mut pos);
        }
        let mut vars = Vec::new();
        while pos < chars.len() && (chars[pos] == 'X' || chars[pos] == 'x') {
            pos += 1;
            let s = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let index: usize = chars[s..pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err("variable index"))?;
            let mut exp = 1u32;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                skip_ws(&mut pos);
                let s = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = chars[s..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("exponent"))?;
            }
            vars.push((index, exp));
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
            }
        }
        if coeff_text.is_empty() && vars.is_empty() {
            return Err(err("empty term"));
        }
        terms.push((vars, coeff));
        skip_ws(&mut pos);
        if pos < chars.len() && !matches!(chars[pos], '+' | '-') {
            return Err(err(&format!("unexpected character {:?}", chars[pos])));
        }
    }
    let max_index = terms
        .iter()
        .flat_map(|(v, _)| v.iter().map(|(i, _)| *i))
        .max();
    let n = match (nvars, max_index) {
        (Some(n), Some(mi)) if mi >= n => {
            return Err(GeometryError::IndexOutOfRange { index: mi, len: n })
        }
        (Some(n), _) => n,
        (None, Some(mi)) => mi + 1,
        (None, None) => 1,
    };
    Ok(Polynomial::from_terms(
        n,
        terms.into_iter().map(|(vars, c)| {
            let mut e = vec![0u32; n];
            for (i, k) in vars {
                e[i] += k;
            }
            (Monomial::new(e), c)
        }),
    ))
}

/// Parses a homogeneous polynomial (see [`parse_polynomial`]).
pub fn parse_homogeneous(
    text: &str,
    nvars: Option<usize>,
) -> Result<HomogeneousPolynomial<Rational>, GeometryError> {
    HomogeneousPolynomial::new(parse_polynomial(text, nvars)?)
}

/// Parses `(a0 : a1 : ... : an)` with rational or decimal entries.
pub fn parse_point(text: &str) -> Result<ProjPoint<Rational>, GeometryError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| GeometryError::Parse(format!("point must be parenthesized: {text:?}")))?;
    let coords = inner
        .split(':')
        .map(|c| {
            parse_rational(c)
                .ok_or_else(|| GeometryError::Parse(format!("bad coordinate {c:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroPoint);
    }
    ProjPoint::new(coords)
}
