//! Run parameters: command-line flags over a TOML config file over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hfock_core::{Convention, QuadratureSpec, Scheme};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Paper,
    Basis,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::PaperSum,
            ConventionArg::Basis => Convention::BasisSum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Midpoint,
    GaussLegendre,
}

/// Flags shared by every command. Each one may also be set in the config
/// file under the same name with `_` for `-`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Weight parameter α > 0 [default: 1]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Harmonic kernel convention [default: basis]
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Ball and lattice radius r > 0 [default: 1]
    #[arg(long)]
    pub r: Option<f64>,
    /// Lattice extent M (points nr + imr with |n|, |m| ≤ M)
    #[arg(long)]
    pub extent: Option<usize>,
    /// Schatten exponent p ≥ 1, `inf` allowed [default: 2]
    #[arg(short = 'p', long = "p")]
    pub p: Option<f64>,
    /// Basis cuts N, comma separated
    #[arg(long, value_delimiter = ',')]
    pub trunc: Option<Vec<usize>>,
    /// Inner probe half-width W
    #[arg(long)]
    pub window: Option<f64>,
    /// Probe grid step [default: 0.25/√α]
    #[arg(long)]
    pub probe_step: Option<f64>,
    /// Half-width of the integration square [default: extent + 6/√α]
    #[arg(long)]
    pub quad_radius: Option<f64>,
    /// Midpoint cell width [default: 0.05/√α]
    #[arg(long)]
    pub quad_step: Option<f64>,
    /// Integration rule [default: midpoint]
    #[arg(long, value_enum)]
    pub quad_scheme: Option<SchemeArg>,
    /// Gauss–Legendre nodes per axis [default: 160]
    #[arg(long)]
    pub quad_nodes: Option<usize>,
    /// Covering factor for `lattice` [default: 2]
    #[arg(long)]
    pub factor: Option<f64>,
    /// Output directory [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// `self` where set, otherwise `fallback`.
    pub fn or(self, fallback: Overrides) -> Overrides {
        Overrides {
            alpha: self.alpha.or(fallback.alpha),
            convention: self.convention.or(fallback.convention),
            r: self.r.or(fallback.r),
            extent: self.extent.or(fallback.extent),
            p: self.p.or(fallback.p),
            trunc: self.trunc.or(fallback.trunc),
            window: self.window.or(fallback.window),
            probe_step: self.probe_step.or(fallback.probe_step),
            quad_radius: self.quad_radius.or(fallback.quad_radius),
            quad_step: self.quad_step.or(fallback.quad_step),
            quad_scheme: self.quad_scheme.or(fallback.quad_scheme),
            quad_nodes: self.quad_nodes.or(fallback.quad_nodes),
            factor: self.factor.or(fallback.factor),
            out: self.out.or(fallback.out),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SettingsError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid parameter `{name}`: {reason}")]
    Invalid { name: &'static str, reason: &'static str },
}

pub fn load_config(path: &Path) -> Result<Overrides, SettingsError> {
    let text = std::fs::read_to_string(path).map_err(|source| SettingsError::Read {
        path: path.display().to_string(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| SettingsError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Fully resolved parameters, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub alpha: f64,
    pub convention: ConventionArg,
    pub r: f64,
    pub p: f64,
    pub factor: f64,
    pub extent: Option<usize>,
    pub trunc: Option<Vec<usize>>,
    pub window: Option<f64>,
    pub probe_step: Option<f64>,
    pub quad_radius: Option<f64>,
    pub quad_step: Option<f64>,
    pub quad_scheme: SchemeArg,
    pub quad_nodes: usize,
    #[serde(skip)]
    pub out: PathBuf,
}

fn check(name: &'static str, ok: bool, reason: &'static str) -> Result<(), SettingsError> {
    if ok {
        Ok(())
    } else {
        Err(SettingsError::Invalid { name, reason })
    }
}

fn positive(name: &'static str, v: Option<f64>) -> Result<(), SettingsError> {
    check(name, v.is_none_or(|x| x.is_finite() && x > 0.0), "must be finite and > 0")
}

impl Settings {
    pub fn resolve(o: Overrides) -> Result<Self, SettingsError> {
        positive("alpha", o.alpha)?;
        positive("r", o.r)?;
        positive("window", o.window)?;
        positive("probe-step", o.probe_step)?;
        positive("quad-radius", o.quad_radius)?;
        positive("quad-step", o.quad_step)?;
        positive("factor", o.factor)?;
        check("p", o.p.is_none_or(|p| p >= 1.0), "must be >= 1 (or inf)")?;
        check("quad-nodes", o.quad_nodes.is_none_or(|n| n >= 2), "must be >= 2")?;
        if let Some(t) = &o.trunc {
            check("trunc", !t.is_empty(), "needs at least one cut")?;
            check("trunc", t.windows(2).all(|w| w[0] < w[1]), "must be strictly ascending")?;
        }
        Ok(Self {
            alpha: o.alpha.unwrap_or(1.0),
            convention: o.convention.unwrap_or(ConventionArg::Basis),
            r: o.r.unwrap_or(1.0),
            p: o.p.unwrap_or(2.0),
            factor: o.factor.unwrap_or(2.0),
            extent: o.extent,
            trunc: o.trunc,
            window: o.window,
            probe_step: o.probe_step,
            quad_radius: o.quad_radius,
            quad_step: o.quad_step,
            quad_scheme: o.quad_scheme.unwrap_or(SchemeArg::Midpoint),
            quad_nodes: o.quad_nodes.unwrap_or(160),
            out: o.out.unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    /// Quadrature for points within `extent` of the origin, with overrides.
    pub fn quadrature(&self, extent: f64) -> QuadratureSpec {
        let mut q = QuadratureSpec::for_alpha(self.alpha, extent);
        if let Some(r) = self.quad_radius {
            q.radius = r;
        }
        if let Some(h) = self.quad_step {
            q.step = h;
        }
        q.nodes_per_axis = self.quad_nodes;
        q.scheme = match self.quad_scheme {
            SchemeArg::Midpoint => Scheme::Midpoint,
            SchemeArg::GaussLegendre => Scheme::GaussLegendre,
        };
        q
    }
}
