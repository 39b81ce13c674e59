//! Rectangular sampling grids over ℂ and the scalar fields sampled on them.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{exponent, positive, Error, Result};
use crate::quadrature::compensated_sum;

/// Sample points `origin + (i·step, j·step)` for `i < nx`, `j < ny`.
///
/// Each sample stands for the square cell of side `step` centred on it, so
/// grid sums approximate area integrals with cell area `step²`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub origin: Complex64,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(origin: Complex64, step: f64, nx: usize, ny: usize) -> Result<Self> {
        positive("grid.step", step)?;
        if !(origin.re.is_finite() && origin.im.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "grid.origin",
                reason: "must be finite",
            });
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Empty("grid"));
        }
        Ok(Self {
            origin,
            step,
            nx,
            ny,
        })
    }

    /// Symmetric square grid on `[-window, window]²` with the origin as a
    /// sample point; the step is shrunk so the window edges are samples too.
    pub fn centered(window: f64, step: f64) -> Result<Self> {
        positive("grid.step", step)?;
        if !(window.is_finite() && window >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "grid.window",
                reason: "must be finite and >= 0",
            });
        }
        let half = (window / step).ceil() as usize;
        let h = if half == 0 { step } else { window / half as f64 };
        let n = 2 * half + 1;
        Self::new(Complex64::new(-(half as f64) * h, -(half as f64) * h), h, n, n)
    }

    /// `count × count` grid spanning `[-window, window]²` edge to edge.
    pub fn with_count(window: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter {
                name: "grid.count",
                reason: "must be >= 2",
            });
        }
        let step = 2.0 * positive("grid.window", window)? / (count - 1) as f64;
        Self::new(Complex64::new(-window, -window), step, count, count)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_area(&self) -> f64 {
        self.step * self.step
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        self.origin + Complex64::new(ix as f64 * self.step, iy as f64 * self.step)
    }

    /// Points in row-major order (`y` outer, `x` inner).
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| self.point(ix, iy)))
    }

    /// Largest distance from the origin of ℂ to a grid point.
    pub fn reach(&self) -> f64 {
        let corners = [
            self.point(0, 0),
            self.point(self.nx - 1, 0),
            self.point(0, self.ny - 1),
            self.point(self.nx - 1, self.ny - 1),
        ];
        corners.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// A real function sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScalarField {
    pub grid: GridSpec,
    /// Row-major samples, `samples[iy * nx + ix]`.
    pub samples: Vec<f64>,
    pub description: String,
}

impl ScalarField {
    /// Evaluates `f` at every grid point; the first failing or non-finite
    /// sample aborts with its grid index.
    pub fn sample<F>(grid: GridSpec, description: impl Into<String>, mut f: F) -> Result<Self>
    where
        F: FnMut(Complex64) -> Result<f64>,
    {
        let mut samples = Vec::with_capacity(grid.len());
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let v = f(grid.point(ix, iy))?;
                if !v.is_finite() {
                    return Err(Error::NonFiniteField { ix, iy, value: v });
                }
                samples.push(v);
            }
        }
        Ok(Self {
            grid,
            samples,
            description: description.into(),
        })
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.samples[iy * self.grid.nx + ix]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.grid.points().zip(self.samples.iter().copied())
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(Σ |s|^p · step²)^{1/p}`, or the max of `|s|` for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        exponent("p", p)?;
        if p.is_infinite() {
            return Ok(self.samples.iter().map(|s| s.abs()).fold(0.0, f64::max));
        }
        let sum = compensated_sum(self.samples.iter().map(|s| s.abs().powf(p)));
        Ok((sum * self.grid.cell_area()).powf(1.0 / p))
    }

    /// Σ s · step², the grid approximation of ∫ s dA.
    pub fn integral(&self) -> f64 {
        compensated_sum(self.samples.iter().copied()) * self.grid.cell_area()
    }
}
