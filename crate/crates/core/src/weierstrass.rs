//! Complex tori `C / (Z + Z τ)`: Eisenstein series, the Weierstrass `℘`
//! function and its derivative, and the embedding `[z] -> (℘(z) : ℘'(z) : 1)`
//! onto the cubic `Y^2 Z = 4 X^3 - g2 X Z^2 - g3 Z^3`.
//!
//! Lattice sums are truncated to the rows `ω = m + n τ` with `|n| <= N`;
//! within a row the sum over `m` is taken in closed form,
//!
//! ```text
//! Σ_m (w - m)^-2 = π² csc²(πw)
//! Σ_m (w - m)^-3 = π³ cot(πw) csc²(πw)
//! Σ_m (w - m)^-4 = π⁴ (s² - 2s/3),           s = csc²(πw)
//! Σ_m (w - m)^-6 = π⁶ (s³ - s² + 2s/15)
//! ```
//!
//! so the neglected rows decay like `exp(-2π N Im τ)`. Rows `n` and `-n`
//! are always added as a pair, which makes `℘(-z) = ℘(z)` hold bit for bit.

use num_complex::Complex;
use thiserror::Error;

use crate::projgeo::ProjPoint;
use crate::scalar::{Real, C64};

/// Default number of lattice rows on each side of the real axis.
pub const DEFAULT_CUTOFF: u32 = 60;

/// Minimum admissible distance from `z` to the lattice.
pub const POLE_GUARD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeierstrassError {
    #[error("Im(tau) must be positive")]
    NotInUpperHalfPlane,
    #[error("cutoff must be at least 4, got {0}")]
    CutoffTooSmall(u32),
    #[error("z is within {POLE_GUARD} of a lattice point (pole)")]
    PoleAtLatticePoint,
}

/// `(cot(πw), csc²(πw))`, evaluated through `q = exp(±2πiw)` with `|q| <= 1`
/// so large `|Im w|` neither overflows nor cancels.
fn cot_csc2<T: Real>(w: Complex<T>) -> (Complex<T>, Complex<T>) {
    let pi = T::PI();
    let i = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    let (x, sign) = if w.im >= T::zero() { (w * pi, T::one()) } else { (-w * pi, -T::one()) };
    let q = (i * x * T::lit(2.0)).exp();
    let cot = i * (q + one) / (q - one) * sign;
    let csc2 = -(q * T::lit(4.0)) / ((q - one) * (q - one));
    (cot, csc2)
}

/// The lattice `Γ = Z + Z τ` with `Im τ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice<T> {
    tau: Complex<T>,
}

impl<T: Real> Lattice<T> {
    pub fn new(tau: Complex<T>) -> Result<Self, WeierstrassError> {
        if tau.im <= T::zero() || !tau.im.is_finite() || !tau.re.is_finite() {
            return Err(WeierstrassError::NotInUpperHalfPlane);
        }
        Ok(Lattice { tau })
    }

    pub fn tau(&self) -> Complex<T> {
        self.tau
    }

    pub fn point(&self, m: i64, n: i64) -> Complex<T> {
        Complex::new(T::lit(m as f64), T::zero()) + self.tau * T::lit(n as f64)
    }

    /// Nearest lattice point to `z` (searching the neighbours of the
    /// rounded coordinates).
    pub fn nearest_point(&self, z: Complex<T>) -> Complex<T> {
        let n0 = (z.im / self.tau.im).round();
        let mut best = self.tau * n0;
        let mut best_d = T::infinity();
        for dn in -1..=1 {
            let n = n0 + T::lit(f64::from(dn));
            let base = z - self.tau * n;
            let m0 = base.re.round();
            for dm in -1..=1 {
                let m = m0 + T::lit(f64::from(dm));
                let w = Complex::new(m, T::zero()) + self.tau * n;
                let d = (z - w).norm();
                if d < best_d {
                    best_d = d;
                    best = w;
                }
            }
        }
        best
    }

    pub fn distance_to_lattice(&self, z: Complex<T>) -> T {
        (z - self.nearest_point(z)).norm()
    }

    /// Truncation to the rows `|n| <= cutoff`.
    pub fn truncate(&self, cutoff: u32) -> Result<TruncatedLattice<T>, WeierstrassError> {
        if cutoff < 4 {
            return Err(WeierstrassError::CutoffTooSmall(cutoff));
        }
        // summed from the outermost row inwards
        let row_shifts = (1..=cutoff)
            .rev()
            .map(|n| self.tau * T::lit(f64::from(n)))
            .collect();
        Ok(TruncatedLattice { lattice: *self, cutoff, row_shifts })
    }
}

/// A lattice truncated to finitely many rows.
#[derive(Clone, Debug)]
pub struct TruncatedLattice<T> {
    lattice: Lattice<T>,
    cutoff: u32,
    /// `n τ` for `n = cutoff, ..., 1`.
    row_shifts: Vec<Complex<T>>,
}

impl<T: Real> TruncatedLattice<T> {
    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `Σ' ω^-4` and `Σ' ω^-6`.
    fn eisenstein_sums(&self) -> (Complex<T>, Complex<T>) {
        let pi2 = T::PI() * T::PI();
        let pi4 = pi2 * pi2;
        let pi6 = pi4 * pi2;
        let two = T::lit(2.0);
        let mut g4 = Complex::new(T::zero(), T::zero());
        let mut g6 = Complex::new(T::zero(), T::zero());
        for &w in &self.row_shifts {
            // rows n and -n contribute equally to even powers
            let (_, s) = cot_csc2(w);
            g4 = g4 + (s * s - s * T::lit(2.0 / 3.0)) * (pi4 * two);
            g6 = g6 + (s * s * s - s * s + s * T::lit(2.0 / 15.0)) * (pi6 * two);
        }
        // the n = 0 row: 2 ζ(4), 2 ζ(6)
        g4 = g4 + Complex::new(pi4 / T::lit(45.0), T::zero());
        g6 = g6 + Complex::new(pi6 * T::lit(2.0 / 945.0), T::zero());
        (g4, g6)
    }

    /// `(g2, g3) = (60 Σ' ω^-4, 140 Σ' ω^-6)`.
    pub fn invariants(&self) -> (Complex<T>, Complex<T>) {
        let (g4, g6) = self.eisenstein_sums();
        (g4 * T::lit(60.0), g6 * T::lit(140.0))
    }

    fn check_pole(&self, z: Complex<T>) -> Result<(), WeierstrassError> {
        if self.lattice.distance_to_lattice(z) <= T::lit(POLE_GUARD) {
            return Err(WeierstrassError::PoleAtLatticePoint);
        }
        Ok(())
    }

    /// `℘(z) = z^-2 + Σ' [(z - ω)^-2 - ω^-2]`.
    pub fn wp(&self, z: Complex<T>) -> Result<Complex<T>, WeierstrassError> {
        self.check_pole(z)?;
        let pi2 = T::PI() * T::PI();
        let mut acc = Complex::new(T::zero(), T::zero());
        for &w in &self.row_shifts {
            let (_, up) = cot_csc2(z - w);
            let (_, down) = cot_csc2(z + w);
            let (_, row) = cot_csc2(w);
            acc = acc + (up + down - row * T::lit(2.0)) * pi2;
        }
        let (_, s0) = cot_csc2(z);
        Ok(acc + s0 * pi2 - Complex::new(pi2 / T::lit(3.0), T::zero()))
    }

    /// `℘'(z) = -2 Σ (z - ω)^-3`.
    pub fn wp_prime(&self, z: Complex<T>) -> Result<Complex<T>, WeierstrassError> {
        self.check_pole(z)?;
        let pi3 = T::PI() * T::PI() * T::PI();
        let cube_row = |u: Complex<T>| {
            let (c, s) = cot_csc2(u);
            c * s
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for &w in &self.row_shifts {
            acc = acc + cube_row(z - w) + cube_row(z + w);
        }
        Ok((acc + cube_row(z)) * (pi3 * T::lit(-2.0)))
    }

    /// `|℘'^2 - 4 ℘^3 + g2 ℘ + g3|` with all quantities from this truncation.
    pub fn ode_residual(&self, z: Complex<T>) -> Result<T, WeierstrassError> {
        let (g2, g3) = self.invariants();
        let p = self.wp(z)?;
        let dp = self.wp_prime(z)?;
        Ok((dp * dp - p * p * p * T::lit(4.0) + g2 * p + g3).norm())
    }
}

/// Truncated Eisenstein invariants with an empirical tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinPair<T> {
    pub g2: Complex<T>,
    pub g3: Complex<T>,
    pub cutoff: u32,
    /// Largest change of `g2`, `g3` between the cutoffs `N / 2` and `N`.
    pub tail_bound: T,
}

impl<T: Real> EisensteinPair<T> {
    /// `g2^3 - 27 g3^2`.
    pub fn discriminant(&self) -> Complex<T> {
        self.g2 * self.g2 * self.g2 - self.g3 * self.g3 * T::lit(27.0)
    }
}

pub fn eisenstein<T: Real>(lattice: &Lattice<T>, cutoff: u32) -> Result<EisensteinPair<T>, WeierstrassError> {
    let (g2, g3) = lattice.truncate(cutoff)?.invariants();
    let half = (cutoff / 2).max(4);
    let (h2, h3) = lattice.truncate(half)?.invariants();
    let tail_bound = (g2 - h2).norm().max((g3 - h3).norm());
    Ok(EisensteinPair { g2, g3, cutoff, tail_bound })
}

pub fn wp<T: Real>(lattice: &Lattice<T>, z: Complex<T>, cutoff: u32) -> Result<Complex<T>, WeierstrassError> {
    lattice.truncate(cutoff)?.wp(z)
}

pub fn wp_prime<T: Real>(
    lattice: &Lattice<T>,
    z: Complex<T>,
    cutoff: u32,
) -> Result<Complex<T>, WeierstrassError> {
    lattice.truncate(cutoff)?.wp_prime(z)
}

pub fn ode_residual<T: Real>(lattice: &Lattice<T>, z: Complex<T>, cutoff: u32) -> Result<T, WeierstrassError> {
    lattice.truncate(cutoff)?.ode_residual(z)
}

/// `[z] -> (℘(z) : ℘'(z) : 1)`, and `[0] -> (0 : 1 : 0)`.
pub fn embed(lattice: &Lattice<f64>, z: C64, cutoff: u32) -> Result<ProjPoint<C64>, WeierstrassError> {
    embed_truncated(&lattice.truncate(cutoff)?, z)
}

pub fn embed_truncated(trunc: &TruncatedLattice<f64>, z: C64) -> Result<ProjPoint<C64>, WeierstrassError> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let coords = if trunc.lattice().distance_to_lattice(z) <= POLE_GUARD {
        vec![zero, one, zero]
    } else {
        vec![trunc.wp(z)?, trunc.wp_prime(z)?, one]
    };
    Ok(ProjPoint::new(coords).expect("nonzero by construction"))
}
