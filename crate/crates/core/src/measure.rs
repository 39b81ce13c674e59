//! Positive Borel measures on ℂ, the square lattice `rℤ²`, ball masses and
//! the averaging function `μ̂_r(z) = μ(B(z, r)) / (π r²)`.
//!
//! Discs are open: `B(z, r) = {ω : |ω − z| < r}`. Lattice cells are the
//! half-open squares `[-r/2, r/2)²` translated by lattice points.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{nonnegative, positive, Error, Result};
use crate::grid::GridSpec;
use crate::quadrature::{compensated_sum, integrate_nodes, Node, QuadratureSpec};

pub type ComplexPoint = Complex64;

/// Finite point constructor; rejects NaN and infinities.
pub fn point(x: f64, y: f64) -> Result<ComplexPoint> {
    if x.is_finite() && y.is_finite() {
        Ok(Complex64::new(x, y))
    } else {
        Err(Error::InvalidParameter {
            name: "point",
            reason: "coordinates must be finite",
        })
    }
}

/// Window `{n r + i m r : |n|, |m| ≤ extent}` of the lattice `rℤ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeSpec {
    pub spacing: f64,
    pub extent: usize,
}

impl LatticeSpec {
    pub fn new(spacing: f64, extent: usize) -> Result<Self> {
        positive("lattice.r", spacing)?;
        Ok(Self { spacing, extent })
    }

    pub fn len(&self) -> usize {
        let side = 2 * self.extent + 1;
        side * side
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer coordinates `(n, m)` of the cell `S_r + a` containing `z`.
    pub fn cell_of(&self, z: ComplexPoint) -> (i64, i64) {
        let r = self.spacing;
        ((z.re / r + 0.5).floor() as i64, (z.im / r + 0.5).floor() as i64)
    }
}

pub fn cell_area(spec: &LatticeSpec) -> f64 {
    spec.spacing * spec.spacing
}

/// All `(2M+1)²` lattice points, `m` (imaginary index) outer and `n` inner,
/// both ascending.
pub fn lattice_points(spec: &LatticeSpec) -> Vec<ComplexPoint> {
    let m = spec.extent as i64;
    let r = spec.spacing;
    (-m..=m)
        .flat_map(|j| (-m..=m).map(move |i| Complex64::new(i as f64 * r, j as f64 * r)))
        .collect()
}

/// Nonnegative density profiles φ; the measure is `φ dA`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DensityProfile {
    Constant {
        c: f64,
    },
    /// `amplitude · exp(−|z − center|² / width²)`.
    GaussianBump {
        amplitude: f64,
        center: ComplexPoint,
        width: f64,
    },
    DiskIndicator {
        center: ComplexPoint,
        radius: f64,
        height: f64,
    },
    /// `height` on `inner ≤ |z − center| < outer`.
    Annulus {
        center: ComplexPoint,
        inner: f64,
        outer: f64,
        height: f64,
    },
    /// `(Σ_k c_k |z|^k) · exp(−decay |z|²)`.
    RadialPolyGaussian {
        coefficients: Vec<f64>,
        decay: f64,
    },
}

impl DensityProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant { c } => {
                nonnegative("density.c", *c)?;
            }
            Self::GaussianBump {
                amplitude,
                center,
                width,
            } => {
                nonnegative("density.amplitude", *amplitude)?;
                point(center.re, center.im)?;
                positive("density.width", *width)?;
            }
            Self::DiskIndicator {
                center,
                radius,
                height,
            } => {
                point(center.re, center.im)?;
                positive("density.radius", *radius)?;
                nonnegative("density.height", *height)?;
            }
            Self::Annulus {
                center,
                inner,
                outer,
                height,
            } => {
                point(center.re, center.im)?;
                nonnegative("density.inner", *inner)?;
                positive("density.outer", *outer)?;
                if inner >= outer {
                    return Err(Error::InvalidParameter {
                        name: "density.inner",
                        reason: "must be < outer",
                    });
                }
                nonnegative("density.height", *height)?;
            }
            Self::RadialPolyGaussian {
                coefficients,
                decay,
            } => {
                for c in coefficients {
                    nonnegative("density.coefficients", *c)?;
                }
                positive("density.decay", *decay)?;
            }
        }
        Ok(())
    }

    pub fn value(&self, z: ComplexPoint) -> f64 {
        match self {
            Self::Constant { c } => *c,
            Self::GaussianBump {
                amplitude,
                center,
                width,
            } => amplitude * (-(z - center).norm_sqr() / (width * width)).exp(),
            Self::DiskIndicator {
                center,
                radius,
                height,
            } => {
                if (z - center).norm() < *radius {
                    *height
                } else {
                    0.0
                }
            }
            Self::Annulus {
                center,
                inner,
                outer,
                height,
            } => {
                let d = (z - center).norm();
                if d >= *inner && d < *outer {
                    *height
                } else {
                    0.0
                }
            }
            Self::RadialPolyGaussian {
                coefficients,
                decay,
            } => {
                let s = z.norm();
                let poly = coefficients.iter().rev().fold(0.0, |acc, c| acc * s + c);
                poly * (-decay * s * s).exp()
            }
        }
    }

    /// Upper bound on the profile (exact except for the polynomial family,
    /// where it is a sampled maximum).
    pub fn sup(&self) -> f64 {
        match self {
            Self::Constant { c } => *c,
            Self::GaussianBump { amplitude, .. } => *amplitude,
            Self::DiskIndicator { height, .. } | Self::Annulus { height, .. } => *height,
            Self::RadialPolyGaussian { decay, .. } => {
                let reach = 8.0 / decay.sqrt();
                (0..=4000)
                    .map(|k| self.value(Complex64::new(reach * k as f64 / 4000.0, 0.0)))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// The profile multiplied by `k ≥ 0`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Constant { c } => *c *= k,
            Self::GaussianBump { amplitude, .. } => *amplitude *= k,
            Self::DiskIndicator { height, .. } | Self::Annulus { height, .. } => *height *= k,
            Self::RadialPolyGaussian { coefficients, .. } => {
                coefficients.iter_mut().for_each(|c| *c *= k)
            }
        }
        out
    }

    /// Whether the profile carries mass outside the disc `|z| < radius`
    /// beyond double-precision noise.
    pub fn exceeds(&self, radius: f64) -> bool {
        match self {
            Self::Constant { c } => *c > 0.0,
            Self::GaussianBump {
                amplitude,
                center,
                width,
            } => {
                let gap = (radius - center.norm()).max(0.0) / width;
                *amplitude > 0.0 && (-gap * gap).exp() > f64::EPSILON
            }
            Self::DiskIndicator {
                center,
                radius: rho,
                height,
            } => *height > 0.0 && center.norm() + rho > radius,
            Self::Annulus {
                center,
                outer,
                height,
                ..
            } => *height > 0.0 && center.norm() + outer > radius,
            Self::RadialPolyGaussian { .. } => {
                let peak = self.sup();
                let edge = self.value(Complex64::new(radius, 0.0));
                peak > 0.0 && edge > f64::EPSILON * peak
            }
        }
    }

    /// Distance from the origin beyond which the profile is negligible.
    pub fn reach(&self) -> f64 {
        match self {
            Self::Constant { .. } => f64::INFINITY,
            Self::GaussianBump { center, width, .. } => center.norm() + 6.0 * width,
            Self::DiskIndicator { center, radius, .. } => center.norm() + radius,
            Self::Annulus { center, outer, .. } => center.norm() + outer,
            Self::RadialPolyGaussian { decay, .. } => 6.0 / decay.sqrt(),
        }
    }
}

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub location: ComplexPoint,
    pub weight: f64,
}

/// A positive measure in one of the supported concrete forms.
///
/// Lattice-weighted measures are normalized to [`Measure::Atomic`] when
/// built, so downstream code sees two representations only.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Measure {
    Atomic { atoms: Vec<Atom> },
    /// `profile · dA` restricted to the disc `|z| < support_radius`.
    Density {
        profile: DensityProfile,
        support_radius: f64,
    },
}

impl Measure {
    /// Atoms with zero weight are dropped; negative or non-finite weights
    /// and non-finite locations are rejected.
    pub fn atomic<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ComplexPoint, f64)>,
    {
        let mut out = Vec::new();
        for (location, weight) in atoms {
            point(location.re, location.im)?;
            nonnegative("atom.weight", weight)?;
            if weight > 0.0 {
                out.push(Atom { location, weight });
            }
        }
        Ok(Self::Atomic { atoms: out })
    }

    /// The unit point mass at `z`.
    pub fn dirac(z: ComplexPoint) -> Self {
        Self::Atomic {
            atoms: alloc::vec![Atom {
                location: z,
                weight: 1.0
            }],
        }
    }

    /// One weight per lattice point, in [`lattice_points`] order.
    pub fn lattice_weighted(lattice: &LatticeSpec, weights: &[f64]) -> Result<Self> {
        if weights.len() != lattice.len() {
            return Err(Error::InvalidParameter {
                name: "lattice.weights",
                reason: "needs one weight per lattice point",
            });
        }
        Self::atomic(lattice_points(lattice).into_iter().zip(weights.iter().copied()))
    }

    /// Lattice measure with weights `g(a)` evaluated at each lattice point.
    pub fn lattice_from_fn<F: Fn(ComplexPoint) -> f64>(lattice: &LatticeSpec, g: F) -> Result<Self> {
        let weights: Vec<f64> = lattice_points(lattice).into_iter().map(g).collect();
        Self::lattice_weighted(lattice, &weights)
    }

    pub fn density(profile: DensityProfile, support_radius: f64) -> Result<Self> {
        profile.validate()?;
        positive("support_radius", support_radius)?;
        Ok(Self::Density {
            profile,
            support_radius,
        })
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Self::Atomic { .. })
    }

    /// Whether the measure stands for an infinite (or wider) measure cut
    /// off at its support radius.
    pub fn truncated(&self) -> bool {
        match self {
            Self::Atomic { .. } => false,
            Self::Density {
                profile,
                support_radius,
            } => profile.exceeds(*support_radius),
        }
    }

    /// Radius of a disc about the origin that carries all of the mass.
    pub fn extent(&self) -> f64 {
        match self {
            Self::Atomic { atoms } => atoms.iter().map(|a| a.location.norm()).fold(0.0, f64::max),
            Self::Density {
                profile,
                support_radius,
            } => profile.reach().min(*support_radius),
        }
    }

    /// The measure `c · μ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        nonnegative("scale", c)?;
        Ok(match self {
            Self::Atomic { atoms } => Self::Atomic {
                atoms: atoms
                    .iter()
                    .filter(|_| c > 0.0)
                    .map(|a| Atom {
                        location: a.location,
                        weight: a.weight * c,
                    })
                    .collect(),
            },
            Self::Density {
                profile,
                support_radius,
            } => Self::Density {
                profile: profile.scaled(c),
                support_radius: *support_radius,
            },
        })
    }

    /// Weighted nodes representing the measure: the atoms themselves, or the
    /// quadrature nodes of the support disc weighted by the profile.
    pub fn nodes(&self, spec: &QuadratureSpec) -> Result<Vec<Node>> {
        match self {
            Self::Atomic { atoms } => Ok(atoms
                .iter()
                .map(|a| Node {
                    point: a.location,
                    weight: a.weight,
                })
                .collect()),
            Self::Density {
                profile,
                support_radius,
            } => {
                spec.validate()?;
                let s = *support_radius;
                Ok(spec
                    .square_nodes(s)
                    .into_iter()
                    .filter(|n| n.point.norm() < s)
                    .map(|n| Node {
                        point: n.point,
                        weight: n.weight * profile.value(n.point),
                    })
                    .filter(|n| n.weight > 0.0)
                    .collect())
            }
        }
    }

    /// Profile value including the support cut-off; zero for atomic measures.
    pub fn density_at(&self, z: ComplexPoint) -> f64 {
        match self {
            Self::Atomic { .. } => 0.0,
            Self::Density {
                profile,
                support_radius,
            } => {
                if z.norm() < *support_radius {
                    profile.value(z)
                } else {
                    0.0
                }
            }
        }
    }
}

/// μ-mass of the open disc `B(center, radius)`.
///
/// Atomic measures are summed exactly; densities use the polar disc rule of
/// `quad` over the disc intersected with the support.
pub fn ball_mass(mu: &Measure, center: ComplexPoint, radius: f64, quad: &QuadratureSpec) -> Result<f64> {
    positive("radius", radius)?;
    match mu {
        Measure::Atomic { atoms } => Ok(compensated_sum(
            atoms
                .iter()
                .filter(|a| (a.location - center).norm() < radius)
                .map(|a| a.weight),
        )),
        Measure::Density { .. } => {
            quad.validate()?;
            integrate_nodes(&quad.disc_nodes(center, radius), |z| mu.density_at(z))
        }
    }
}

/// `μ̂_r(z) = μ(B(z, r)) / (π r²)`.
pub fn avg_function(mu: &Measure, center: ComplexPoint, radius: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(ball_mass(mu, center, radius, quad)? / (PI * radius * radius))
}

/// Total mass together with the truncation flag.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Mass {
    pub value: f64,
    pub truncated: bool,
}

/// μ(ℂ): exact for atoms, quadrature over the support disc for densities.
pub fn total_mass(mu: &Measure, quad: &QuadratureSpec) -> Result<Mass> {
    let value = match mu {
        Measure::Atomic { atoms } => compensated_sum(atoms.iter().map(|a| a.weight)),
        Measure::Density { .. } => compensated_sum(mu.nodes(quad)?.iter().map(|n| n.weight)),
    };
    Ok(Mass {
        value,
        truncated: mu.truncated(),
    })
}

/// Largest number of lattice points within `factor · r` of a probe point.
///
/// Probe points should lie well inside the lattice window, otherwise
/// points outside the window go uncounted.
pub fn covering_multiplicity(spec: &LatticeSpec, factor: f64, probe: &GridSpec) -> Result<usize> {
    positive("factor", factor)?;
    if probe.is_empty() {
        return Err(Error::Empty("probe grid"));
    }
    let lattice = lattice_points(spec);
    let reach = factor * spec.spacing;
    Ok(probe
        .points()
        .map(|z| lattice.iter().filter(|a| (z - **a).norm() < reach).count())
        .max()
        .unwrap_or(0))
}
