//! Command-line front end for `quantvar`.
//!
//! Exit codes: `0` success (thresholds met, or no threshold applies), `1`
//! threshold violation or computational failure, `2` usage or input error.

pub mod curves;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use quantvar::btquant::{self, build_quadrature, doubling_levels, Check, SmoothFunction};
use quantvar::config::{OutputFormat, RunConfig};
use quantvar::coordring::GradedRingPresentation;
use quantvar::gitquot::{self, GitExample, LimitDirection};
use quantvar::projgeo::{evaluate, parse_polynomial, CubicParams, CubicType, ProjPoint};
use quantvar::scalar::parse_rational;
use quantvar::weierstrass::Lattice;
use quantvar::Rational;
use serde_json::{json, Value};

use curves::{count_components, curve_points, PlaneCurve, Window};
use output::{Artifact, Verdict};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "QUANTVAR_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "quantvar", version, about = "Projective geometry, Weierstrass tori, Berezin-Toeplitz quantization and moment maps")]
pub struct Cli {
    /// TOML run configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output format (overrides the config).
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    /// Write `<command>.<format>` into this directory instead of stdout.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the Weierstrass cubic `Y^2 Z = 4X^3 - g2 X Z^2 - g3 Z^3`.
    ClassifyCubic {
        #[arg(long, allow_hyphen_values = true)]
        g2: String,
        #[arg(long, allow_hyphen_values = true)]
        g3: String,
    },
    /// Real points of a plane curve along grid lines.
    CurvePoints(CurveArgs),
    /// Lattice invariants and points of the torus embedded in P^2.
    WeierstrassEmbed {
        /// Period ratio `re,im` with `im > 0`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: C64,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Convergence series of a Berezin-Toeplitz check over doubling levels.
    BtConverge {
        #[arg(long, value_parser = parse_check)]
        check: Check,
        #[arg(long, default_value = "x3")]
        f: String,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 4)]
        m_min: u32,
        #[arg(long, default_value_t = 64)]
        m_max: u32,
    },
    /// Tuynman relation `Q_f = i T_{f - Δf/2m}` at the configured quadrature
    /// and at twice its resolution.
    TuynmanCheck {
        #[arg(long, value_delimiter = ',', default_value = "x1,x3")]
        f: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        levels: Vec<u32>,
    },
    /// Moment map, semistability and the zero-level correspondence for a
    /// diagonal C* action on P^n (JSON).
    MomentMap {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,1")]
        weights: Vec<i64>,
        /// Sample count (defaults to the config).
        #[arg(long)]
        samples: Option<usize>,
        /// Zero-level tolerance (defaults to the config).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Hilbert function of a complete intersection.
    Hilbert {
        #[arg(long)]
        nvars: usize,
        /// Relation degrees; empty for the polynomial ring.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
        /// Range `a..b` (inclusive).
        #[arg(long, value_parser = parse_range, default_value = "0..10")]
        m: (u32, u32),
    },
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Polynomial in `x0, x1` (affine) or homogeneous in `X0, X1, X2`
    /// (read in the chart `X2 = 1`).
    #[arg(long, conflicts_with_all = ["g2", "g3"], allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Weierstrass cubic coefficients instead of `--f`.
    #[arg(long, requires = "g3", allow_hyphen_values = true)]
    pub g2: Option<String>,
    #[arg(long, requires = "g2", allow_hyphen_values = true)]
    pub g3: Option<String>,
    /// `x_min,x_max,y_min,y_max`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2,2,-2,2")]
    pub window: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("unknown format '{s}' (expected csv or json)")),
    }
}

fn parse_check(s: &str) -> Result<Check, String> {
    s.parse()
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    match parts.as_slice() {
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        [re] => Ok(C64::new(num(re)?, 0.0)),
        _ => Err(format!("expected re,im: {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b: {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Usage(String),
    /// Computation failed: exit code 1.
    Compute(String),
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }

    fn compute(e: impl ToString) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim()).ok_or_else(|| CliError::Usage(format!("not a rational number: {s:?}")))
}

fn function(name: &str) -> Result<SmoothFunction, CliError> {
    SmoothFunction::by_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown function '{name}' (expected 1, x1, x2, x3, x3^2 or x1x2)")))
}

fn cubic_type_name(t: CubicType) -> &'static str {
    match t {
        CubicType::Smooth => "Smooth",
        CubicType::Nodal => "Nodal",
        CubicType::Cuspidal => "Cuspidal",
    }
}

fn classify_cubic(g2: &str, g3: &str) -> Result<Artifact, CliError> {
    let params = CubicParams::new(rational(g2)?, rational(g3)?);
    let kind = params.classify();
    let singular = params.singular_point();
    let mut a = Artifact::new("classify-cubic", vec!["g2", "g3", "discriminant", "type", "singular_point"]);
    a.row(vec![
        json!(params.g2.to_string()),
        json!(params.g3.to_string()),
        json!(params.discriminant().to_string()),
        json!(cubic_type_name(kind)),
        json!(singular.as_ref().map_or_else(String::new, ToString::to_string)),
    ]);
    a.note("equation", params.homogeneous().to_string());
    // the verdict is internal consistency: singular exactly when not smooth
    a.verdict = Verdict::from_bool((kind == CubicType::Smooth) == singular.is_none());
    Ok(a)
}

fn curve_points_cmd(args: &CurveArgs) -> Result<Artifact, CliError> {
    let poly = match (&args.f, &args.g2, &args.g3) {
        (Some(f), _, _) => parse_polynomial(f, None).map_err(CliError::usage)?,
        (None, Some(g2), Some(g3)) => CubicParams::new(rational(g2)?, rational(g3)?).homogeneous().into_poly(),
        _ => return Err(CliError::Usage("curve-points needs --f or --g2/--g3".into())),
    };
    let curve = PlaneCurve::from_polynomial(&poly).map_err(CliError::Usage)?;
    let [x_min, x_max, y_min, y_max] = args.window[..] else {
        return Err(CliError::Usage("--window takes four numbers".into()));
    };
    let window = Window { x_min, x_max, y_min, y_max };
    let pts = curve_points(&curve, window, args.resolution);
    let mut a = Artifact::new("curve-points", vec!["x", "y", "line"]);
    for p in &pts {
        a.row(vec![json!(p.x), json!(p.y), json!(p.line.to_string())]);
    }
    a.note("points", pts.len());
    if args.resolution > 0 && window.x_max > window.x_min {
        let cell = ((x_max - x_min) / args.resolution as f64).max((y_max - y_min) / args.resolution as f64);
        a.note("components", count_components(&pts, 2.0 * cell));
    }
    Ok(a)
}

/// Deterministic off-lattice sample `u + v τ` with `(u, v)` on an additive
/// recurrence in the fundamental parallelogram.
fn torus_samples(lattice: &Lattice<f64>, count: usize) -> Vec<C64> {
    let (a1, a2) = (0.618_033_988_749_894_8, 0.754_877_666_246_692_7);
    let mut out = Vec::with_capacity(count);
    let mut k = 0usize;
    while out.len() < count {
        k += 1;
        let u = (0.1 + k as f64 * a1).fract();
        let v = (0.27 + k as f64 * a2).fract();
        let z = C64::new(u, 0.0) + lattice.tau() * v;
        if lattice.distance_to_lattice(z) > 0.1 {
            out.push(z);
        }
    }
    out
}

fn weierstrass_embed(cfg: &RunConfig, tau: C64, count: usize) -> Result<Artifact, CliError> {
    let lattice = Lattice::new(tau).map_err(CliError::usage)?;
    let trunc = lattice.truncate(cfg.lattice_cutoff).map_err(CliError::usage)?;
    let inv = quantvar::weierstrass::eisenstein(&lattice, cfg.lattice_cutoff).map_err(CliError::compute)?;
    let cubic = CubicParams::new(inv.g2, inv.g3).homogeneous();
    let mass = 5.0 + inv.g2.norm() + inv.g3.norm();
    let mut a = Artifact::new(
        "weierstrass-embed",
        vec!["z_re", "z_im", "x_re", "x_im", "y_re", "y_im", "z0_re", "z0_im", "cubic_residual", "ode_residual"],
    );
    let (mut worst_cubic, mut worst_ode) = (0.0_f64, 0.0_f64);
    for z in torus_samples(&lattice, count) {
        let p = quantvar::weierstrass::embed_truncated(&trunc, z).map_err(CliError::compute)?.normalized();
        let res = evaluate(&cubic, &p).map_err(CliError::compute)?.norm() / mass;
        let ode = trunc.ode_residual(z).map_err(CliError::compute)?;
        worst_cubic = worst_cubic.max(res);
        worst_ode = worst_ode.max(ode);
        let c = p.coords();
        a.row(vec![
            json!(z.re),
            json!(z.im),
            json!(c[0].re),
            json!(c[0].im),
            json!(c[1].re),
            json!(c[1].im),
            json!(c[2].re),
            json!(c[2].im),
            json!(res),
            json!(ode),
        ]);
    }
    a.note("g2_re", inv.g2.re);
    a.note("g2_im", inv.g2.im);
    a.note("g3_re", inv.g3.re);
    a.note("g3_im", inv.g3.im);
    a.note("tail_bound", inv.tail_bound);
    a.note("max_cubic_residual", worst_cubic);
    a.note("max_ode_residual", worst_ode);
    let t = &cfg.tolerances;
    a.verdict = Verdict::from_bool(worst_cubic <= t.embed && worst_ode <= t.ode);
    Ok(a)
}

fn bt_converge(
    cfg: &RunConfig,
    check: Check,
    f: &str,
    g: Option<&str>,
    m_min: u32,
    m_max: u32,
) -> Result<Artifact, CliError> {
    if m_min == 0 || m_min > m_max {
        return Err(CliError::Usage(format!("need 1 <= m-min <= m-max, got {m_min}..{m_max}")));
    }
    let f = function(f)?;
    let g = g.map(function).transpose()?;
    let levels = doubling_levels(m_min, m_max);
    let quad = build_quadrature(m_max, cfg.quadrature.radial, cfg.quadrature.angular).map_err(CliError::usage)?;
    let series = btquant::run_check(check, &f, g.as_ref(), &levels, &quad).map_err(|e| match e {
        btquant::QuantError::MissingSecondFunction(_) => CliError::usage(e),
        e => CliError::compute(e),
    })?;
    let mut a = Artifact::new(format!("bt-converge-{check}"), vec!["m", "value"]);
    for &(m, v) in &series.rows {
        a.row(vec![json!(m), json!(v)]);
    }
    a.note("check", check.name());
    a.note("f", series.f.clone());
    if let Some(g) = &series.g {
        a.note("g", g.clone());
    }
    if let Some(s) = series.slope {
        a.note("slope", s);
    }
    if let Some(c) = series.constant {
        a.note("constant", c);
    }
    let t = &cfg.tolerances;
    let slope_ok = |tol: f64| series.slope.is_some_and(|s| (s + 1.0).abs() <= tol);
    let (first, last) = (series.first().unwrap_or(0.0), series.last().unwrap_or(0.0));
    let ok = match check {
        Check::Norm => {
            let excess = series.rows.iter().map(|r| -r.1).fold(f64::NEG_INFINITY, f64::max);
            a.note("max_excess", excess);
            slope_ok(t.norm_slope) && excess <= t.norm_bound
        }
        Check::Dirac => slope_ok(t.rate_slope) && last < first * t.dirac_ratio,
        Check::Product => slope_ok(t.rate_slope),
        Check::C1 => series.decreasing_from(8) && last < first * t.c1_ratio,
        Check::Tuynman => series.max_value() <= t.tuynman,
    };
    a.verdict = Verdict::from_bool(ok);
    Ok(a)
}

fn tuynman_check(cfg: &RunConfig, fs: &[String], levels: &[u32]) -> Result<Artifact, CliError> {
    let m_max = levels.iter().copied().max().ok_or_else(|| CliError::Usage("no levels".into()))?;
    if levels.contains(&0) {
        return Err(CliError::Usage("levels must be positive".into()));
    }
    let fine_cfg = cfg.refined();
    let coarse = build_quadrature(m_max, cfg.quadrature.radial, cfg.quadrature.angular).map_err(CliError::usage)?;
    let fine = build_quadrature(m_max, fine_cfg.quadrature.radial, fine_cfg.quadrature.angular).map_err(CliError::usage)?;
    let t = &cfg.tolerances;
    let mut a = Artifact::new("tuynman-check", vec!["f", "m", "residual", "residual_refined", "reduction"]);
    let (mut bound_ok, mut refine_ok) = (true, true);
    for name in fs {
        let f = function(name)?;
        for &m in levels {
            let r = btquant::tuynman_residual(&f, m, &coarse).map_err(CliError::compute)?;
            let rf = btquant::tuynman_residual(&f, m, &fine).map_err(CliError::compute)?;
            let reduction = r / rf;
            bound_ok &= r <= t.tuynman;
            refine_ok &= reduction >= t.tuynman_refinement;
            a.row(vec![json!(name), json!(m), json!(r), json!(rf), json!(reduction)]);
        }
    }
    a.note("bound_ok", bound_ok);
    a.note("refinement_ok", refine_ok);
    a.verdict = Verdict::from_bool(bound_ok && refine_ok);
    Ok(a)
}

fn pair(c: &C64) -> Value {
    json!([c.re, c.im])
}

fn moment_map_cmd(cfg: &RunConfig, weights: &[i64], samples: Option<usize>, tol: Option<f64>) -> Result<Artifact, CliError> {
    if weights.is_empty() {
        return Err(CliError::Usage("--weights needs at least one entry".into()));
    }
    let samples = samples.unwrap_or(cfg.samples);
    let tol = tol.unwrap_or(cfg.tolerances.moment);
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let ex = GitExample::by_weights(weights);
    let dim = weights.len();
    let mut general = gitquot::sample_points(dim, samples, cfg.seed);
    for j in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[j] = C64::new(1.0, 0.0);
        general.push(ProjPoint::new(e).expect("unit vector"));
    }
    let zeros = gitquot::sample_zero_level(&ex, samples, cfg.seed.wrapping_add(1), tol).map_err(CliError::compute)?;
    let report = gitquot::kirwan_correspondence_check(&ex, &general, &zeros, tol).map_err(CliError::compute)?;
    let certificate: Vec<Value> = ex
        .invariants
        .polys
        .iter()
        .zip(&ex.invariants.certificates)
        .map(|(f, ok)| json!({"polynomial": f.to_string(), "certified": ok}))
        .collect();
    let mut a = Artifact::new(
        "moment-map",
        vec!["point", "mu", "orbit_dim", "semistable", "orbit_meets_zero_level", "limit_to_zero", "limit_to_infinity"],
    );
    let w = weights;
    for x in &general {
        let lim = |d| gitquot::one_param_limit(w, x, d).map(|p| p.coords().iter().map(pair).collect::<Vec<_>>());
        let p = report_row(&report, x);
        a.row(vec![
            json!(x.coords().iter().map(pair).collect::<Vec<_>>()),
            json!(p.mu),
            json!(p.orbit_dim),
            p.semistable.map_or_else(|| json!("undetermined"), |b| json!(b)),
            json!(p.orbit_meets_zero_level),
            json!(lim(LimitDirection::ToZero).map_err(CliError::compute)?),
            json!(lim(LimitDirection::ToInfinity).map_err(CliError::compute)?),
        ]);
    }
    a.note("example", report.example.clone());
    a.note("weights", json!(weights));
    a.note("seed", cfg.seed);
    a.note("zero_level_seed", cfg.seed.wrapping_add(1));
    a.note("samples", report.samples);
    a.note("zero_level_samples", report.zero_level_samples);
    a.note("determinable", report.determinable);
    a.note("semistable_count", report.semistable_count);
    a.note("equivalence_violations", report.equivalence_violations);
    a.note("zero_level_unstable", report.zero_level_unstable);
    a.note("k_orbit_classes", report.k_orbit_classes);
    a.note("invariant_classes", report.invariant_classes);
    a.note("quotient_cardinality", json!(report.quotient_cardinality));
    a.note("invariants", json!(certificate));
    if let Some(n) = &report.note {
        a.note("note", n.clone());
    }
    a.verdict = if report.determinable {
        Verdict::from_bool(report.holds() && ex.invariants.all_certified())
    } else {
        Verdict::None
    };
    Ok(a)
}

fn report_row<'a>(report: &'a gitquot::KirwanReport, x: &ProjPoint<C64>) -> &'a gitquot::PointReport {
    let key: Vec<[f64; 2]> = x.coords().iter().map(|c| [c.re, c.im]).collect();
    report.points.iter().find(|p| p.point == key).expect("every sample has a report row")
}

fn hilbert(nvars: usize, degrees: &[u32], range: (u32, u32)) -> Result<Artifact, CliError> {
    let ring = GradedRingPresentation::new(nvars, degrees.to_vec()).map_err(CliError::usage)?;
    let mut a = Artifact::new("hilbert", vec!["m", "value"]);
    for m in range.0..=range.1 {
        let v = ring.hilbert_function(m);
        // exact integers are emitted as text when they exceed i64
        let cell = i64::try_from(&v).map_or_else(|_| json!(v.to_string()), |v| json!(v));
        a.row(vec![json!(m), cell]);
    }
    a.note("hilbert_polynomial_degree", ring.hilbert_polynomial_degree());
    a.note("krull_dim", ring.krull_dim());
    a.note("variety_dim", ring.variety_dim());
    Ok(a)
}

/// Runs a parsed command line, returning the process exit code.
pub fn run(cli: Cli) -> ExitCode {
    match execute(&cli) {
        Ok(Verdict::Fail) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Verdict, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(CliError::usage)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let artifact = match &cli.command {
        Command::ClassifyCubic { g2, g3 } => classify_cubic(g2, g3)?,
        Command::CurvePoints(args) => curve_points_cmd(args)?,
        Command::WeierstrassEmbed { tau, points } => weierstrass_embed(&cfg, *tau, *points)?,
        Command::BtConverge { check, f, g, m_min, m_max } => bt_converge(&cfg, *check, f, g.as_deref(), *m_min, *m_max)?,
        Command::TuynmanCheck { f, levels } => tuynman_check(&cfg, f, levels)?,
        Command::MomentMap { weights, samples, tol } => moment_map_cmd(&cfg, weights, *samples, *tol)?,
        Command::Hilbert { nvars, degrees, m } => hilbert(*nvars, degrees, *m)?,
    };
    if !artifact.all_finite() {
        return Err(CliError::Compute(format!("{}: non-finite value in output", artifact.name)));
    }
    // the moment-map report is structured and always emitted as JSON
    let format = if matches!(cli.command, Command::MomentMap { .. }) { OutputFormat::Json } else { cfg.format };
    artifact.write(format, &cfg, cli.out_dir.as_deref()).map_err(CliError::compute)?;
    Ok(artifact.verdict)
}
