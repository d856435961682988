//! Run configuration shared by the command-line front end and the
//! acceptance suite: quadrature resolution, lattice cutoff, per-check
//! tolerances, sampling seed and output format.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("tolerance '{0}' must be positive and finite")]
    NonPositiveTolerance(&'static str),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Product Gauss-Legendre x trapezoid rule on the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub radial: usize,
    pub angular: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { radial: 48, angular: 136 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// `|‖T_x3‖ - m/(m+2)|`.
    pub norm_exact: f64,
    /// Allowed excess of `‖T_f‖` over `‖f‖_∞`.
    pub norm_bound: f64,
    /// Allowed deviation of the norm-gap slope from -1.
    pub norm_slope: f64,
    /// Allowed deviation of the Dirac, product and c1 slopes from -1.
    pub rate_slope: f64,
    /// Required `last / first` for the Dirac residual.
    pub dirac_ratio: f64,
    /// Required `last / first` for the c1 residual.
    pub c1_ratio: f64,
    pub tuynman: f64,
    /// Required residual reduction when the quadrature is doubled.
    pub tuynman_refinement: f64,
    pub curvature: f64,
    /// `|∫ω / 2π - 1|`.
    pub mass: f64,
    pub ode: f64,
    /// `|g3(i)|`, `|g2(e^{iπ/3})|`.
    pub eisenstein_zero: f64,
    /// Cubic equation residual on embedded points.
    pub embed: f64,
    /// `‖μ‖` for membership in the zero level.
    pub moment: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm_exact: 1e-8,
            norm_bound: 1e-8,
            norm_slope: 0.15,
            rate_slope: 0.3,
            dirac_ratio: 0.125,
            c1_ratio: 0.05,
            tuynman: 1e-6,
            tuynman_refinement: 2.0,
            curvature: 1e-5,
            mass: 1e-8,
            ode: 1e-6,
            eisenstein_zero: 1e-10,
            embed: 1e-5,
            moment: 1e-8,
        }
    }
}

impl Tolerances {
    fn named(&self) -> [(&'static str, f64); 14] {
        [
            ("norm_exact", self.norm_exact),
            ("norm_bound", self.norm_bound),
            ("norm_slope", self.norm_slope),
            ("rate_slope", self.rate_slope),
            ("dirac_ratio", self.dirac_ratio),
            ("c1_ratio", self.c1_ratio),
            ("tuynman", self.tuynman),
            ("tuynman_refinement", self.tuynman_refinement),
            ("curvature", self.curvature),
            ("mass", self.mass),
            ("ode", self.ode),
            ("eisenstein_zero", self.eisenstein_zero),
            ("embed", self.embed),
            ("moment", self.moment),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    /// Strip cutoff `N` for lattice sums.
    pub lattice_cutoff: u32,
    pub seed: u64,
    /// Sample count for the moment-map and correspondence checks.
    pub samples: usize,
    pub format: OutputFormat,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quadrature: QuadratureConfig::default(),
            lattice_cutoff: 60,
            seed: 20_251_019,
            samples: 200,
            format: OutputFormat::Csv,
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in self.tolerances.named() {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::NonPositiveTolerance(name));
            }
        }
        if self.quadrature.radial == 0 || self.quadrature.angular == 0 {
            return Err(ConfigError::NonPositive("quadrature resolution"));
        }
        if self.lattice_cutoff == 0 {
            return Err(ConfigError::NonPositive("lattice_cutoff"));
        }
        if self.samples == 0 {
            return Err(ConfigError::NonPositive("samples"));
        }
        Ok(())
    }

    /// The same configuration with both quadrature resolutions doubled.
    pub fn refined(&self) -> Self {
        let mut cfg = self.clone();
        cfg.quadrature.radial *= 2;
        cfg.quadrature.angular *= 2;
        cfg
    }

    /// Canonical TOML text of the configuration, embedded into every
    /// output artifact.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
