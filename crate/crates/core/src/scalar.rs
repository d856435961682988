//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! Polynomials, points and varieties are generic over [`Scalar`]. Exact
//! scalars ([`Rational`], [`GaussRational`]) give exact zero tests and exact
//! matrix ranks; floating scalars (`f32`, `f64`, [`C64`]) fall back to the
//! relative singular-value threshold [`FLOAT_RANK_REL_THRESHOLD`].

use std::fmt;
use std::ops::Neg;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Gaussian rational `a + b i` with `a, b` rational.
pub type GaussRational = Complex<BigRational>;

/// Double-precision complex number.
pub type C64 = Complex<f64>;

/// Singular values below this fraction of the largest one count as zero.
pub const FLOAT_RANK_REL_THRESHOLD: f64 = 1e-9;

/// Relative threshold used by [`Scalar::is_negligible`] for floating scalars.
pub const FLOAT_ZERO_REL_THRESHOLD: f64 = 1e-12;

/// Coefficient / coordinate type for the algebraic code.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` for types whose arithmetic is exact.
    const EXACT: bool;

    /// Approximate modulus as `f64`.
    fn modulus(&self) -> f64;

    fn to_c64(&self) -> C64;

    fn from_i64(v: i64) -> Self;

    /// Exact types: `is_zero()`. Floating types: modulus below
    /// `FLOAT_ZERO_REL_THRESHOLD * scale`.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= FLOAT_ZERO_REL_THRESHOLD * scale.max(f64::MIN_POSITIVE)
        }
    }

    /// Rank of a dense matrix given row by row. Exact for exact scalars.
    fn rank(rows: &[Vec<Self>]) -> usize;
}

/// Floating-point element type for the numerical modules (`f32` / `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn rank(rows: &[Vec<Self>]) -> usize {
        let int_rows = rows
            .iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter()
                    .map(|q| q.numer() * (&lcm / q.denom()))
                    .collect::<Vec<_>>()
            })
            .collect();
        bareiss_rank(int_rows)
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn modulus(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(<Rational as Scalar>::from_i64(v), Rational::zero())
    }

    fn rank(rows: &[Vec<Self>]) -> usize {
        let int_rows = rows
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, z| {
                    acc.lcm(z.re.denom()).lcm(z.im.denom())
                });
                row.iter()
                    .map(|z| {
                        Complex::new(
                            z.re.numer() * (&lcm / z.re.denom()),
                            z.im.numer() * (&lcm / z.im.denom()),
                        )
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        bareiss_rank(int_rows)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn to_c64(&self) -> C64 {
        C64::new(*self, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn rank(rows: &[Vec<Self>]) -> usize {
        float_rank(rows.iter().map(|r| r.iter().map(|x| C64::new(*x, 0.0)).collect()))
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn modulus(&self) -> f64 {
        f64::from(self.abs())
    }

    fn to_c64(&self) -> C64 {
        C64::new(f64::from(*self), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn rank(rows: &[Vec<Self>]) -> usize {
        float_rank(
            rows.iter()
                .map(|r| r.iter().map(|x| C64::new(f64::from(*x), 0.0)).collect()),
        )
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn rank(rows: &[Vec<Self>]) -> usize {
        float_rank(rows.iter().cloned())
    }
}

/// Parses a rational from `p`, `p/q` or a finite decimal such as `-0.125`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Converts an `f64` into the exact rational it represents.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Rank of an integral-domain matrix by fraction-free (Bareiss) elimination.
///
/// Every division performed is exact, so `T` only needs ring operations plus
/// exact division (big integers, Gaussian integers, or any field).
pub fn bareiss_rank<T: Clone + Num>(mut m: Vec<Vec<T>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            let lead = m[r][col].clone();
            for c in col + 1..cols {
                let v = pivot.clone() * m[r][c].clone() - lead.clone() * m[rank][c].clone();
                m[r][c] = v / prev.clone();
            }
            m[r][col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Numerical rank: number of singular values above
/// `FLOAT_RANK_REL_THRESHOLD * sigma_max`.
pub fn float_rank<I>(rows: I) -> usize
where
    I: IntoIterator<Item = Vec<C64>>,
{
    let rows: Vec<Vec<C64>> = rows.into_iter().collect();
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    if ncols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 || !max.is_finite() {
        return 0;
    }
    sv.iter()
        .filter(|&&s| s > FLOAT_RANK_REL_THRESHOLD * max)
        .count()
}

/// Like [`float_rank`], but singular values must also exceed
/// `FLOAT_RANK_REL_THRESHOLD * floor`. Used when the rows are already
/// normalized to unit scale, so an all-tiny matrix has rank zero.
pub fn float_rank_with_floor(rows: Vec<Vec<C64>>, floor: f64) -> usize {
    let nrows = rows.len();
    if nrows == 0 || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(nrows, rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max).max(floor);
    sv.iter()
        .filter(|&&s| s > FLOAT_RANK_REL_THRESHOLD * max)
        .count()
}

/// Small helper for building rationals in tests and examples.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Real part embedding `Rational -> GaussRational`.
pub fn gauss(re: Rational, im: Rational) -> GaussRational {
    Complex::new(re, im)
}

/// Sign of a rational as -1, 0 or 1.
pub fn rational_sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
