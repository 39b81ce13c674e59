//! Berezin transforms `μ̃(z) = ∫ |h_z(u)|² e^{-α|u|²} dμ(u)` and
//! `φ̃(z) = ∫ φ |h_z|² dλ_α`, sampled fields and their radial decay.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub use crate::grid::{GridSpec, ScalarField};

use crate::error::{positive, Error, Result};
use crate::kernel::{berezin_density, FockConfig};
use crate::measure::{ball_mass, ComplexPoint, DensityProfile, Measure};
use crate::quadrature::{integrate_nodes, Node, QuadratureSpec};

/// A measure discretized once for repeated Berezin evaluations.
#[derive(Debug, Clone)]
pub struct BerezinTransform {
    cfg: FockConfig,
    nodes: Vec<Node>,
}

impl BerezinTransform {
    pub fn new(cfg: &FockConfig, mu: &Measure, quad: &QuadratureSpec) -> Result<Self> {
        Ok(Self {
            cfg: *cfg,
            nodes: mu.nodes(quad)?,
        })
    }

    /// Transform of the symbol `φ`, i.e. of the measure `(α/π) φ dA` on the
    /// quadrature square.
    pub fn of_symbol(cfg: &FockConfig, phi: &DensityProfile, quad: &QuadratureSpec) -> Result<Self> {
        phi.validate()?;
        quad.validate()?;
        let scale = cfg.alpha / PI;
        let nodes = quad
            .plane_nodes()
            .into_iter()
            .map(|n| Node {
                point: n.point,
                weight: n.weight * scale * phi.value(n.point),
            })
            .filter(|n| n.weight > 0.0)
            .collect();
        Ok(Self { cfg: *cfg, nodes })
    }

    pub fn at(&self, z: ComplexPoint) -> Result<f64> {
        integrate_nodes(&self.nodes, |u| berezin_density(&self.cfg, z, u))
    }
}

/// `μ̃(z)`.
pub fn berezin_at(cfg: &FockConfig, mu: &Measure, z: ComplexPoint, quad: &QuadratureSpec) -> Result<f64> {
    BerezinTransform::new(cfg, mu, quad)?.at(z)
}

/// `φ̃(z)`.
pub fn berezin_symbol_at(cfg: &FockConfig, phi: &DensityProfile, z: ComplexPoint, quad: &QuadratureSpec) -> Result<f64> {
    BerezinTransform::of_symbol(cfg, phi, quad)?.at(z)
}

/// Samples a point function on a grid.
pub fn sample_field<F>(grid: GridSpec, description: impl Into<String>, f: F) -> Result<ScalarField>
where
    F: FnMut(ComplexPoint) -> Result<f64>,
{
    ScalarField::sample(grid, description, f)
}

/// See [`ScalarField::lp_norm`].
pub fn field_lp_norm(field: &ScalarField, p: f64) -> Result<f64> {
    field.lp_norm(p)
}

/// Number of angles sampled on each circle of a radial profile.
pub const PROFILE_ANGLES: usize = 64;

/// For each radius, the maximum of `f` over `PROFILE_ANGLES` points on the
/// circle `|z| = radius` (a single point for radius zero).
pub fn radial_decay_profile<F>(radii: &[f64], mut f: F) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(ComplexPoint) -> Result<f64>,
{
    if radii.windows(2).any(|w| w[0] > w[1]) || radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "radii",
            reason: "must be finite, nonnegative and ascending",
        });
    }
    let mut out = Vec::with_capacity(radii.len());
    for &rho in radii {
        let mut best = f64::NEG_INFINITY;
        let count = if rho == 0.0 { 1 } else { PROFILE_ANGLES };
        for k in 0..count {
            let theta = 2.0 * PI * k as f64 / PROFILE_ANGLES as f64;
            best = best.max(f(Complex64::from_polar(rho, theta))?);
        }
        out.push((rho, best));
    }
    Ok(out)
}

/// Largest ratio `μ(B(z, r)) / μ̃(z)` over a probe grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallRatio {
    pub max_ratio: f64,
    pub at: ComplexPoint,
    /// Probe points where the ball carried mass.
    pub counted: usize,
}

/// Empirical constant of `μ(B(z, r)) ≤ C μ̃(z)` on the probe grid; points
/// with empty balls are skipped.
pub fn ball_berezin_ratio(
    cfg: &FockConfig,
    mu: &Measure,
    r: f64,
    probe: &GridSpec,
    quad: &QuadratureSpec,
) -> Result<BallRatio> {
    positive("r", r)?;
    let transform = BerezinTransform::new(cfg, mu, quad)?;
    let mut best = BallRatio {
        max_ratio: 0.0,
        at: Complex64::new(0.0, 0.0),
        counted: 0,
    };
    for z in probe.points() {
        let mass = ball_mass(mu, z, r, quad)?;
        if mass <= 0.0 {
            continue;
        }
        best.counted += 1;
        let b = transform.at(z)?;
        let ratio = if b > 0.0 { mass / b } else { f64::INFINITY };
        if ratio > best.max_ratio {
            best.max_ratio = ratio;
            best.at = z;
        }
    }
    Ok(best)
}
