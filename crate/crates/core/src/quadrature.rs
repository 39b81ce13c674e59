//! Numerical integration over the complex plane.
//!
//! Integrals against area measure are discretized on the square
//! `[-R, R]²` with either a midpoint rule or a tensor Gauss–Legendre rule.
//! Disc integrals (ball masses, pointwise estimates) use a polar product
//! rule: Gauss–Legendre in the radius and the trapezoid rule in the angle,
//! which is spectrally accurate for smooth integrands.
//!
//! Node order is fixed (row-major, `y` outer and `x` inner) and every sum
//! is compensated, so results are bitwise reproducible for a given spec.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{positive, Error, Result};
use crate::kernel::FockConfig;
use crate::measure::Measure;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    if n == 0 {
        return (nodes, weights);
    }
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Scheme {
    Midpoint,
    GaussLegendre,
}

/// Discretization parameters for integrals over ℂ.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpec {
    /// Half-width `R` of the integration square `[-R, R]²`.
    pub radius: f64,
    /// Target cell width of the midpoint rule.
    pub step: f64,
    /// Nodes per axis of the tensor Gauss–Legendre rule.
    pub nodes_per_axis: usize,
    pub scheme: Scheme,
    /// Radial and angular node counts of the polar disc rule.
    pub disc_radial: usize,
    pub disc_angular: usize,
}

impl QuadratureSpec {
    /// Default rule for weight `alpha` when the points of interest lie within
    /// distance `extent` of the origin: `R = extent + 6/√α`, `h = 0.05/√α`.
    pub fn for_alpha(alpha: f64, extent: f64) -> Self {
        let s = alpha.sqrt();
        Self {
            radius: extent.max(0.0) + 6.0 / s,
            step: 0.05 / s,
            nodes_per_axis: 160,
            scheme: Scheme::Midpoint,
            disc_radial: 48,
            disc_angular: 128,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn gauss_legendre(mut self, nodes_per_axis: usize) -> Self {
        self.scheme = Scheme::GaussLegendre;
        self.nodes_per_axis = nodes_per_axis;
        self
    }

    pub fn validate(&self) -> Result<()> {
        positive("quad.radius", self.radius)?;
        match self.scheme {
            Scheme::Midpoint => {
                positive("quad.step", self.step)?;
            }
            Scheme::GaussLegendre => {
                if self.nodes_per_axis < 2 {
                    return Err(Error::InvalidParameter {
                        name: "quad.nodes_per_axis",
                        reason: "must be >= 2",
                    });
                }
            }
        }
        if self.disc_radial < 1 || self.disc_angular < 3 {
            return Err(Error::InvalidParameter {
                name: "quad.disc",
                reason: "needs >= 1 radial and >= 3 angular nodes",
            });
        }
        Ok(())
    }

    /// The same rule at half resolution (double step or half the nodes).
    pub fn coarsened(&self) -> Self {
        let mut spec = *self;
        spec.step *= 2.0;
        spec.nodes_per_axis = (self.nodes_per_axis / 2).max(2);
        spec
    }

    /// 1D nodes and weights on `[-half, half]`.
    fn axis(&self, half: f64) -> (Vec<f64>, Vec<f64>) {
        match self.scheme {
            Scheme::Midpoint => {
                let cells = ((2.0 * half / self.step).ceil() as usize).max(1);
                let h = 2.0 * half / cells as f64;
                let xs = (0..cells).map(|i| -half + (i as f64 + 0.5) * h).collect();
                (xs, alloc::vec![h; cells])
            }
            Scheme::GaussLegendre => {
                let (x, w) = gauss_legendre(self.nodes_per_axis);
                (
                    x.iter().map(|t| t * half).collect(),
                    w.iter().map(|t| t * half).collect(),
                )
            }
        }
    }

    /// Product-rule nodes on `[-half, half]²`, row-major (`y` outer).
    pub fn square_nodes(&self, half: f64) -> Vec<Node> {
        let (xs, ws) = self.axis(half);
        let mut nodes = Vec::with_capacity(xs.len() * xs.len());
        for (y, wy) in xs.iter().zip(&ws) {
            for (x, wx) in xs.iter().zip(&ws) {
                nodes.push(Node {
                    point: Complex64::new(*x, *y),
                    weight: wx * wy,
                });
            }
        }
        nodes
    }

    /// Nodes of the truncated plane `[-R, R]²`.
    pub fn plane_nodes(&self) -> Vec<Node> {
        self.square_nodes(self.radius)
    }

    /// Polar product nodes on the open disc `B(center, radius)`.
    pub fn disc_nodes(&self, center: Complex64, radius: f64) -> Vec<Node> {
        let (t, w) = gauss_legendre(self.disc_radial);
        let na = self.disc_angular;
        let dtheta = 2.0 * PI / na as f64;
        let mut nodes = Vec::with_capacity(t.len() * na);
        for (ti, wi) in t.iter().zip(&w) {
            let rho = 0.5 * radius * (ti + 1.0);
            let wr = 0.5 * radius * wi * rho * dtheta;
            for k in 0..na {
                let theta = k as f64 * dtheta;
                nodes.push(Node {
                    point: center + Complex64::from_polar(rho, theta),
                    weight: wr,
                });
            }
        }
        nodes
    }
}

/// A quadrature node: location in ℂ and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub point: Complex64,
    pub weight: f64,
}

/// Integral value with an optional half-resolution error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: Option<f64>,
}

/// Σ w_k f(z_k) over a node set, compensated, rejecting non-finite samples.
pub fn integrate_nodes<F>(nodes: &[Node], f: F) -> Result<f64>
where
    F: Fn(Complex64) -> f64,
{
    let mut acc = CompensatedSum::new();
    for node in nodes {
        let v = f(node.point);
        if !v.is_finite() {
            return Err(Error::NonFiniteSample {
                x: node.point.re,
                y: node.point.im,
                value: v,
            });
        }
        acc.add(node.weight * v);
    }
    Ok(acc.value())
}

/// Complex-valued counterpart of [`integrate_nodes`].
pub fn integrate_nodes_complex<F>(nodes: &[Node], f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for node in nodes {
        let v = f(node.point);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteSample {
                x: node.point.re,
                y: node.point.im,
                value: if v.re.is_finite() { v.im } else { v.re },
            });
        }
        re.add(node.weight * v.re);
        im.add(node.weight * v.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// ∫_ℂ f dA, truncated to the square `[-R, R]²` of the rule.
pub fn integrate_plane<F>(f: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(Complex64) -> f64,
{
    spec.validate()?;
    let value = integrate_nodes(&spec.plane_nodes(), f)?;
    Ok(Integral {
        value,
        error_estimate: None,
    })
}

/// [`integrate_plane`] plus the difference to the half-resolution rule.
pub fn integrate_plane_with_estimate<F>(f: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(Complex64) -> f64,
{
    spec.validate()?;
    let fine = integrate_nodes(&spec.plane_nodes(), &f)?;
    let coarse = integrate_nodes(&spec.coarsened().plane_nodes(), &f)?;
    Ok(Integral {
        value: fine,
        error_estimate: Some((fine - coarse).abs()),
    })
}

/// ∫ f dλ_α with dλ_α = (α/π) e^{-α|z|²} dA.
pub fn integrate_gaussian<F>(cfg: &FockConfig, f: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(Complex64) -> f64,
{
    let a = cfg.alpha;
    let g = |z: Complex64| f(z) * (-a * z.norm_sqr()).exp();
    let raw = integrate_plane(g, spec)?;
    Ok(Integral {
        value: a / PI * raw.value,
        error_estimate: raw.error_estimate.map(|e| a / PI * e),
    })
}

/// Complex ∫ f dλ_α.
pub fn integrate_gaussian_complex<F>(cfg: &FockConfig, f: F, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    spec.validate()?;
    let a = cfg.alpha;
    let v = integrate_nodes_complex(&spec.plane_nodes(), |z| f(z) * (-a * z.norm_sqr()).exp())?;
    Ok(v * (a / PI))
}

/// ∫ f dμ. Exact weighted sum for atomic measures; quadrature of
/// `f · profile` over the support disc for densities.
pub fn integrate_measure<F>(mu: &Measure, f: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(Complex64) -> f64,
{
    let nodes = mu.nodes(spec)?;
    Ok(Integral {
        value: integrate_nodes(&nodes, f)?,
        error_estimate: if mu.is_atomic() { Some(0.0) } else { None },
    })
}
