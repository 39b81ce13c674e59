//! Reproducing kernels of the analytic and harmonic Fock spaces, the
//! orthonormal basis `{e_n}` of `F_h²`, and the pointwise estimate for
//! harmonic functions.
//!
//! Two harmonic-kernel conventions are supported:
//!
//! * [`Convention::PaperSum`]: `H_z = K_z + conj(K_z)`.
//! * [`Convention::BasisSum`]: `H_z = Σ_n conj(e_n(z)) e_n = K_z + conj(K_z) − 1`,
//!   the kernel that actually reproduces `F_h²`.
//!
//! Both harmonic kernels are real valued. Quantities that only need
//! `|h_z(w)|² e^{-α|w|²}` are evaluated through the reduced kernel
//! `H_z(w) e^{-α(|z|² + |w|²)/2}`, whose leading term is
//! `2 e^{-α|w − z|²/2} cos(α Im(z̄ w))`; it never overflows.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{exponent, positive, Error, Result};
use crate::measure::ComplexPoint;
use crate::quadrature::{integrate_nodes, integrate_nodes_complex, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Convention {
    PaperSum,
    BasisSum,
}

/// Weight parameter α and the harmonic-kernel convention.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FockConfig {
    pub alpha: f64,
    pub convention: Convention,
}

impl FockConfig {
    pub fn new(alpha: f64, convention: Convention) -> Result<Self> {
        positive("alpha", alpha)?;
        Ok(Self { alpha, convention })
    }

    /// The constant subtracted from `K_z + conj(K_z)`.
    fn kernel_offset(&self) -> f64 {
        match self.convention {
            Convention::PaperSum => 0.0,
            Convention::BasisSum => 1.0,
        }
    }
}

/// Index `n ∈ ℤ` of the basis function `e_n`: `z^n` for `n ≥ 0` and
/// `z̄^{|n|}` for `n < 0`, normalized in `L²(dλ_α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisIndex(pub i64);

/// `K_z(w) = e^{α z̄ w}`.
pub fn analytic_kernel(cfg: &FockConfig, z: ComplexPoint, w: ComplexPoint) -> Complex64 {
    (z.conj() * w * cfg.alpha).exp()
}

/// `H_z(w)` in the configured convention.
pub fn harmonic_kernel(cfg: &FockConfig, z: ComplexPoint, w: ComplexPoint) -> Complex64 {
    let k = analytic_kernel(cfg, z, w);
    k + k.conj() - cfg.kernel_offset()
}

/// `H_z(z)`: `2e^{α|z|²}` or `2e^{α|z|²} − 1`.
pub fn kernel_diagonal(cfg: &FockConfig, z: ComplexPoint) -> f64 {
    2.0 * (cfg.alpha * z.norm_sqr()).exp() - cfg.kernel_offset()
}

/// `h_z(w) = H_z(w) / √H_z(z)`.
pub fn normalized_kernel(cfg: &FockConfig, z: ComplexPoint, w: ComplexPoint) -> Complex64 {
    harmonic_kernel(cfg, z, w) / kernel_diagonal(cfg, z).sqrt()
}

/// `H_z(w) e^{-α(|z|² + |w|²)/2}`, overflow-free.
pub fn reduced_kernel(cfg: &FockConfig, z: ComplexPoint, w: ComplexPoint) -> f64 {
    let a = cfg.alpha;
    let lead = 2.0 * (-0.5 * a * (w - z).norm_sqr()).exp() * (a * (z.conj() * w).im).cos();
    match cfg.convention {
        Convention::PaperSum => lead,
        Convention::BasisSum => lead - (-0.5 * a * (z.norm_sqr() + w.norm_sqr())).exp(),
    }
}

/// `H_z(z) e^{-α|z|²}`: `2` or `2 − e^{-α|z|²}`.
pub fn reduced_diagonal(cfg: &FockConfig, z: ComplexPoint) -> f64 {
    match cfg.convention {
        Convention::PaperSum => 2.0,
        Convention::BasisSum => 2.0 - (-cfg.alpha * z.norm_sqr()).exp(),
    }
}

/// `|h_z(u)|² e^{-α|u|²}`, the integrand of the Berezin transform.
pub fn berezin_density(cfg: &FockConfig, z: ComplexPoint, u: ComplexPoint) -> f64 {
    let g = reduced_kernel(cfg, z, u);
    g * g / reduced_diagonal(cfg, z)
}

/// `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `√(α^k / k!)`.
pub fn basis_norm_factor(alpha: f64, k: u64) -> f64 {
    let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
    (0.5 * (k as f64 * alpha.ln() - ln_fact)).exp()
}

/// `e_n(z)`.
pub fn basis_function(cfg: &FockConfig, idx: BasisIndex, z: ComplexPoint) -> Complex64 {
    let k = idx.0.unsigned_abs();
    let base = if idx.0 >= 0 { z } else { z.conj() };
    base.powi(k as i32) * basis_norm_factor(cfg.alpha, k)
}

/// `e_n(u) e^{-α|u|²/2}` for `n = −cut..=cut`, entry `i` holding `n = i − cut`.
///
/// Magnitudes are assembled in log space so that large `|u|` neither
/// overflows the monomial nor underflows the Gaussian prematurely.
pub fn reduced_basis_row(cfg: &FockConfig, u: ComplexPoint, cut: usize, ln_fact: &[f64]) -> Vec<Complex64> {
    let dim = 2 * cut + 1;
    let mut row = alloc::vec![Complex64::new(0.0, 0.0); dim];
    let s = u.norm();
    let gauss = -0.5 * cfg.alpha * s * s;
    row[cut] = Complex64::new(gauss.exp(), 0.0);
    if s == 0.0 {
        return row;
    }
    let ln_s = s.ln();
    let ln_a = cfg.alpha.ln();
    let phase = u / s;
    let mut rot = Complex64::new(1.0, 0.0);
    for k in 1..=cut {
        rot *= phase;
        let kf = k as f64;
        let mag = (0.5 * (kf * ln_a - ln_fact[k]) + kf * ln_s + gauss).exp();
        row[cut + k] = rot * mag;
        row[cut - k] = rot.conj() * mag;
    }
    row
}

/// `Σ_{|n| ≤ cut} conj(e_n(z)) e_n(w)`, the truncated basis expansion of the
/// `BasisSum` kernel.
pub fn kernel_partial_sum(cfg: &FockConfig, z: ComplexPoint, w: ComplexPoint, cut: usize) -> Complex64 {
    let cut = cut as i64;
    let mut re = crate::quadrature::CompensatedSum::new();
    let mut im = crate::quadrature::CompensatedSum::new();
    for n in -cut..=cut {
        let t = basis_function(cfg, BasisIndex(n), z).conj() * basis_function(cfg, BasisIndex(n), w);
        re.add(t.re);
        im.add(t.im);
    }
    Complex64::new(re.value(), im.value())
}

/// A harmonic polynomial `f = f₁ + conj(f₂)` with `f₁, f₂` polynomials and
/// `f₂(0) = 0`; any constant in `f₂` is folded into `f₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPoly {
    analytic: Vec<Complex64>,
    conjugate: Vec<Complex64>,
}

impl HarmonicPoly {
    pub fn new(analytic: Vec<Complex64>, conjugate: Vec<Complex64>) -> Self {
        let mut analytic = analytic;
        let mut conjugate = conjugate;
        if let Some(b0) = conjugate.first_mut() {
            if analytic.is_empty() {
                analytic.push(Complex64::new(0.0, 0.0));
            }
            analytic[0] += b0.conj();
            *b0 = Complex64::new(0.0, 0.0);
        }
        Self { analytic, conjugate }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(alloc::vec![Complex64::new(c, 0.0)], Vec::new())
    }

    /// The basis vector `e_n` written as a polynomial.
    pub fn basis(cfg: &FockConfig, idx: BasisIndex) -> Self {
        let k = idx.0.unsigned_abs() as usize;
        let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(basis_norm_factor(cfg.alpha, k as u64), 0.0);
        if idx.0 >= 0 {
            Self::new(coeffs, Vec::new())
        } else {
            Self::new(Vec::new(), coeffs)
        }
    }

    pub fn analytic(&self) -> &[Complex64] {
        &self.analytic
    }

    /// Coefficients of `f₂`; `f` contains `conj(f₂)`.
    pub fn conjugate(&self) -> &[Complex64] {
        &self.conjugate
    }

    pub fn degree(&self) -> usize {
        let deg = |c: &[Complex64]| c.iter().rposition(|x| x.norm() != 0.0).unwrap_or(0);
        deg(&self.analytic).max(deg(&self.conjugate))
    }

    pub fn eval(&self, z: ComplexPoint) -> Complex64 {
        let horner = |c: &[Complex64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
        horner(&self.analytic) + horner(&self.conjugate).conj()
    }

    /// Coordinates in `{e_n}_{|n| ≤ cut}`, entry `i` for `n = i − cut`.
    pub fn basis_coordinates(&self, cfg: &FockConfig, cut: usize) -> Result<Vec<Complex64>> {
        let degree = self.degree();
        if degree > cut {
            return Err(Error::DegreeTooHigh { degree, cut });
        }
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); 2 * cut + 1];
        for (k, a) in self.analytic.iter().enumerate().filter(|(_, a)| a.norm() != 0.0) {
            v[cut + k] += a / basis_norm_factor(cfg.alpha, k as u64);
        }
        for (k, b) in self.conjugate.iter().enumerate().skip(1).filter(|(_, b)| b.norm() != 0.0) {
            v[cut - k] += b.conj() / basis_norm_factor(cfg.alpha, k as u64);
        }
        Ok(v)
    }
}

/// `⟨f, H_z⟩ = ∫ f conj(H_z) dλ_α` by quadrature (reduced integrand).
pub fn kernel_pairing(cfg: &FockConfig, f: &HarmonicPoly, z: ComplexPoint, quad: &QuadratureSpec) -> Result<Complex64> {
    quad.validate()?;
    let a = cfg.alpha;
    let lift = (0.5 * a * z.norm_sqr()).exp();
    let v = integrate_nodes_complex(&quad.plane_nodes(), |w| {
        f.eval(w) * ((-0.5 * a * w.norm_sqr()).exp() * reduced_kernel(cfg, z, w))
    })?;
    Ok(v * (a / PI * lift))
}

/// `‖h_z‖² = ∫ |h_z|² dλ_α` by quadrature.
pub fn normalized_kernel_norm_sq(cfg: &FockConfig, z: ComplexPoint, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let v = integrate_nodes(&quad.plane_nodes(), |w| berezin_density(cfg, z, w))?;
    Ok(cfg.alpha / PI * v)
}

/// Closed form of `‖h_z‖²`: `1` (BasisSum) or `1 + e^{-α|z|²}` (PaperSum).
pub fn normalized_kernel_norm_sq_exact(cfg: &FockConfig, z: ComplexPoint) -> f64 {
    match cfg.convention {
        Convention::BasisSum => 1.0,
        Convention::PaperSum => 1.0 + (-cfg.alpha * z.norm_sqr()).exp(),
    }
}

/// `C(p, α, r) = pα / (2π (1 − e^{-pαr²/2}))`, the reciprocal of
/// `∫_{B(0,r)} e^{-pα|ω|²/2} dA(ω)`.
pub fn pointwise_estimate_constant(p: f64, alpha: f64, r: f64) -> Result<f64> {
    exponent("p", p)?;
    if p.is_infinite() {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must be finite",
        });
    }
    positive("alpha", alpha)?;
    positive("r", r)?;
    let x = 0.5 * p * alpha * r * r;
    Ok(p * alpha / (2.0 * PI * -(-x).exp_m1()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `|f(a) e^{-α|a|²/2}|^p` with
/// `C(p,α,r) ∫_{B(a,r)} |f(ω) e^{-α|ω|²/2}|^p dA(ω)`.
pub fn pointwise_estimate_check(
    cfg: &FockConfig,
    f: &HarmonicPoly,
    a: ComplexPoint,
    p: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<PointwiseCheck> {
    let constant = pointwise_estimate_constant(p, cfg.alpha, r)?;
    quad.validate()?;
    let weighted = |w: ComplexPoint| f.eval(w).norm() * (-0.5 * cfg.alpha * w.norm_sqr()).exp();
    let lhs = weighted(a).powf(p);
    let integral = integrate_nodes(&quad.disc_nodes(a, r), |w| weighted(w).powf(p))?;
    let rhs = constant * integral;
    Ok(PointwiseCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}
