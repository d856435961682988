use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::C64;

use super::functions::SmoothFunction;
use super::operators::{OperatorMatrix, SectionBasis};
use super::quadrature::QuadratureRule;
use super::QuantError;

/// Least-squares line through `(ln x, ln y)`; `None` with fewer than two
/// points or a nonpositive value.
pub fn loglog_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// `m_min, 2 m_min, 4 m_min, ...` up to `m_max`.
pub fn doubling_levels(m_min: u32, m_max: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut m = m_min.max(1);
    while m <= m_max {
        out.push(m);
        m *= 2;
    }
    out
}

fn diff(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    OperatorMatrix::from_entries(a.m, &a.entries - &b.entries)
}

/// `‖m i [T_f, T_g] - T_{f,g}‖` at one level.
pub fn dirac_residual_in(basis: &SectionBasis, f: &SmoothFunction, g: &SmoothFunction) -> Result<f64, QuantError> {
    let (tf, tg) = (basis.toeplitz(f), basis.toeplitz(g));
    let comm = &tf.entries * &tg.entries - &tg.entries * &tf.entries;
    let scaled = comm * C64::new(0.0, f64::from(basis.level()));
    let bracket = basis.toeplitz(&f.poisson_function(g));
    OperatorMatrix::from_entries(basis.level(), scaled - bracket.entries).norm()
}

pub fn dirac_residual(f: &SmoothFunction, g: &SmoothFunction, m: u32, quad: &QuadratureRule<f64>) -> Result<f64, QuantError> {
    dirac_residual_in(&SectionBasis::new(m, quad)?, f, g)
}

/// `‖T_f T_g - T_{fg}‖` at one level.
pub fn product_residual_in(basis: &SectionBasis, f: &SmoothFunction, g: &SmoothFunction) -> Result<f64, QuantError> {
    let (tf, tg) = (basis.toeplitz(f), basis.toeplitz(g));
    let tfg = basis.toeplitz(&f.product(g));
    OperatorMatrix::from_entries(basis.level(), &tf.entries * &tg.entries - tfg.entries).norm()
}

pub fn product_residual(f: &SmoothFunction, g: &SmoothFunction, m: u32, quad: &QuadratureRule<f64>) -> Result<f64, QuantError> {
    product_residual_in(&SectionBasis::new(m, quad)?, f, g)
}

/// `‖Q_f - i T_{f - Δf/2m}‖` at one level.
pub fn tuynman_residual_in(basis: &SectionBasis, f: &SmoothFunction) -> Result<f64, QuantError> {
    let q = basis.geom_quant(f)?;
    let t = basis.toeplitz(&f.tuynman_symbol(basis.level()));
    let it = OperatorMatrix::from_entries(basis.level(), t.entries * C64::new(0.0, 1.0));
    diff(&q, &it).norm()
}

pub fn tuynman_residual(f: &SmoothFunction, m: u32, quad: &QuadratureRule<f64>) -> Result<f64, QuantError> {
    tuynman_residual_in(&SectionBasis::new(m, quad)?, f)
}

/// One level of the first-order star-product check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarRow {
    pub m: u32,
    /// `‖(M1(f,g) - M1(g,f)) - T_{-i{f,g}}‖` with `M1(f,g) = m (T_f T_g - T_{fg})`.
    pub antisymmetric_residual: f64,
    /// `‖T_f T_g - T_{fg}‖`, which tends to 0 iff `C0(f,g) = fg`.
    pub c0_residual: f64,
}

pub fn star_c1_in(basis: &SectionBasis, f: &SmoothFunction, g: &SmoothFunction) -> Result<StarRow, QuantError> {
    let m = basis.level();
    let mf = C64::new(f64::from(m), 0.0);
    let (tf, tg) = (basis.toeplitz(f), basis.toeplitz(g));
    let tfg = basis.toeplitz(&f.product(g));
    let tgf = basis.toeplitz(&g.product(f));
    let c0 = &tf.entries * &tg.entries - &tfg.entries;
    let m1 = c0.clone() * mf;
    let m1_swap = (&tg.entries * &tf.entries - &tgf.entries) * mf;
    let target = basis.toeplitz(&f.poisson_function(g).scale(C64::new(0.0, -1.0)));
    let antisym = OperatorMatrix::from_entries(m, m1 - m1_swap - target.entries).norm()?;
    let c0 = OperatorMatrix::from_entries(m, c0).norm()?;
    Ok(StarRow { m, antisymmetric_residual: antisym, c0_residual: c0 })
}

pub fn star_c1_check(
    f: &SmoothFunction,
    g: &SmoothFunction,
    levels: &[u32],
    quad: &QuadratureRule<f64>,
) -> Result<Vec<StarRow>, QuantError> {
    levels.iter().map(|&m| star_c1_in(&SectionBasis::new(m, quad)?, f, g)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormRow {
    pub m: u32,
    pub norm: f64,
    /// `‖f‖_∞ - ‖T_f^{(m)}‖`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormTable {
    pub function: String,
    pub sup_norm: f64,
    pub rows: Vec<NormRow>,
    /// Log-log slope of the gap, when every gap is positive.
    pub slope: Option<f64>,
}

impl NormTable {
    /// Largest `‖T_f^{(m)}‖ - ‖f‖_∞` over the table.
    pub fn max_excess(&self) -> f64 {
        self.rows.iter().map(|r| -r.gap).fold(f64::MIN, f64::max)
    }
}

pub fn norm_asymptotics(f: &SmoothFunction, levels: &[u32], quad: &QuadratureRule<f64>) -> Result<NormTable, QuantError> {
    let sup = f.sup_norm();
    let mut rows = Vec::with_capacity(levels.len());
    for &m in levels {
        let norm = SectionBasis::new(m, quad)?.toeplitz(f).norm()?;
        rows.push(NormRow { m, norm, gap: sup - norm });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (f64::from(r.m), r.gap)).collect();
    Ok(NormTable {
        function: f.name().to_string(),
        sup_norm: sup,
        slope: loglog_fit(&pts).map(|(s, _)| s),
        rows,
    })
}

/// The quantity tracked by a convergence run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// `‖f‖_∞ - ‖T_f‖`.
    Norm,
    Dirac,
    Product,
    Tuynman,
    /// Antisymmetrized first star-product coefficient.
    C1,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Norm, Check::Dirac, Check::Product, Check::Tuynman, Check::C1];

    pub fn name(self) -> &'static str {
        match self {
            Check::Norm => "norm",
            Check::Dirac => "dirac",
            Check::Product => "product",
            Check::Tuynman => "tuynman",
            Check::C1 => "c1",
        }
    }

    /// Whether the check tracks an `O(1/m)` rate (as opposed to a residual
    /// that should sit at the numerical floor).
    pub fn is_rate(self) -> bool {
        self != Check::Tuynman
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check '{s}' (expected norm, dirac, product, tuynman or c1)"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub check: Check,
    pub f: String,
    pub g: Option<String>,
    pub rows: Vec<(u32, f64)>,
    pub slope: Option<f64>,
    /// `exp(intercept)` of the log-log fit, i.e. `C` in `value ≈ C m^slope`.
    pub constant: Option<f64>,
}

impl Series {
    pub fn first(&self) -> Option<f64> {
        self.rows.first().map(|r| r.1)
    }

    pub fn last(&self) -> Option<f64> {
        self.rows.last().map(|r| r.1)
    }

    pub fn max_value(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    /// Strictly decreasing over the rows with `m >= from`.
    pub fn decreasing_from(&self, from: u32) -> bool {
        let tail: Vec<f64> = self.rows.iter().filter(|r| r.0 >= from).map(|r| r.1).collect();
        tail.windows(2).all(|w| w[1] < w[0])
    }
}

/// Evaluates `check` at each level. `g` is needed by the two-function
/// checks and ignored otherwise.
pub fn run_check(
    check: Check,
    f: &SmoothFunction,
    g: Option<&SmoothFunction>,
    levels: &[u32],
    quad: &QuadratureRule<f64>,
) -> Result<Series, QuantError> {
    let need_g = || g.ok_or(QuantError::MissingSecondFunction(check.name()));
    let sup = if check == Check::Norm { f.sup_norm() } else { 0.0 };
    let mut rows = Vec::with_capacity(levels.len());
    for &m in levels {
        let basis = SectionBasis::new(m, quad)?;
        let value = match check {
            Check::Norm => sup - basis.toeplitz(f).norm()?,
            Check::Dirac => dirac_residual_in(&basis, f, need_g()?)?,
            Check::Product => product_residual_in(&basis, f, need_g()?)?,
            Check::Tuynman => tuynman_residual_in(&basis, f)?,
            Check::C1 => star_c1_in(&basis, f, need_g()?)?.antisymmetric_residual,
        };
        rows.push((m, value));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|&(m, v)| (f64::from(m), v)).collect();
    let fit = loglog_fit(&pts);
    let uses_g = matches!(check, Check::Dirac | Check::Product | Check::C1);
    Ok(Series {
        check,
        f: f.name().to_string(),
        g: if uses_g { g.map(|g| g.name().to_string()) } else { None },
        rows,
        slope: fit.map(|f| f.0),
        constant: fit.map(|f| f.1.exp()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    /// `max |(-∂∂̄ log ĥ_1) - (1+|z|²)^-2|` over the grid.
    pub level1: f64,
    /// Same for `ĥ_2` against twice the form.
    pub level2: f64,
    /// Level-1 residual recomputed in the chart `w = 1/z` on the overlap.
    pub inverted_chart: f64,
    pub grid_points: usize,
    pub overlap_points: usize,
}

impl CurvatureReport {
    pub fn max_residual(&self) -> f64 {
        self.level1.max(self.level2).max(self.inverted_chart)
    }
}

fn ddbar(f: impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (4.0 * h * h)
}

/// Finite-difference check of the quantum condition `curv = -i ω` for
/// `ĥ_m = (1 + |z|²)^-m` on the square grid of the given spacing inside
/// `|z| <= radius`, with stencil step `step`.
pub fn curvature_check(radius: f64, spacing: f64, step: f64) -> CurvatureReport {
    let log_h = |x: f64, y: f64| -(x * x + y * y).ln_1p();
    let density = |x: f64, y: f64| (1.0 + x * x + y * y).powi(-2);
    // the same data read in the chart w = 1/z
    let to_z = |u: f64, v: f64| {
        let r2 = u * u + v * v;
        (u / r2, -v / r2, r2)
    };
    let log_h_w = |u: f64, v: f64| {
        let (x, y, r2) = to_z(u, v);
        log_h(x, y) - r2.ln()
    };
    let density_w = |u: f64, v: f64| {
        let (x, y, r2) = to_z(u, v);
        density(x, y) / (r2 * r2)
    };
    let n = (radius / spacing).round() as i64;
    let mut report = CurvatureReport { level1: 0.0, level2: 0.0, inverted_chart: 0.0, grid_points: 0, overlap_points: 0 };
    for i in -n..=n {
        for j in -n..=n {
            let (x, y) = (i as f64 * spacing, j as f64 * spacing);
            let r = x.hypot(y);
            if r > radius {
                continue;
            }
            report.grid_points += 1;
            let c1 = -ddbar(log_h, x, y, step);
            report.level1 = report.level1.max((c1 - density(x, y)).abs());
            let c2 = -ddbar(|a, b| 2.0 * log_h(a, b), x, y, step);
            report.level2 = report.level2.max((c2 - 2.0 * density(x, y)).abs());
            if r >= 1.0 / radius {
                report.overlap_points += 1;
                let cw = -ddbar(log_h_w, x, y, step);
                report.inverted_chart = report.inverted_chart.max((cw - density_w(x, y)).abs());
            }
        }
    }
    report
}
