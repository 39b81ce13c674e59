//! Truncated matrices of Toeplitz operators `T_μ` and `T_φ` on `F_h²` in
//! the basis `{e_n}_{|n| ≤ N}`, their spectra and Schatten norms.
//!
//! Entry `(m, n)` is `⟨T e_n, e_m⟩ = ∫ e_n conj(e_m) e^{-α|u|²} dμ(u)`. The
//! entries do not depend on the kernel convention.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::berezin::BerezinTransform;
use crate::eigen::hermitian_eigenvalues;
use crate::error::{exponent, positive, Error, Result};
use crate::kernel::{ln_factorials, reduced_basis_row, FockConfig, HarmonicPoly};
use crate::measure::{avg_function, total_mass, ComplexPoint, DensityProfile, Measure};
use crate::quadrature::{compensated_sum, integrate_nodes, CompensatedSum, Node, QuadratureSpec};

/// Largest tolerated `|A_ij − conj(A_ji)|` before assembly is rejected.
pub const ASYMMETRY_TOLERANCE: f64 = 1e-8;

/// Relative tolerance below zero under which eigenvalues are clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Default basis cut for a measure carried by `|z| ≤ support`:
/// `N = ⌈α R² + 10 √α R + 20⌉`.
pub fn default_cut(alpha: f64, support: f64) -> usize {
    let s = alpha.sqrt() * support.max(0.0);
    (s * s + 10.0 * s + 20.0).ceil() as usize
}

/// Half-width of a square on which `|e_n|² e^{-α|u|²}`, `|n| ≤ cut`, has
/// negligible mass outside: `(√N + 6)/√α`.
pub fn radius_for_cut(alpha: f64, cut: usize) -> f64 {
    ((cut as f64).sqrt() + 6.0) / alpha.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub cfg: FockConfig,
    pub cut: usize,
    /// Row-major, `entries[i * dim + j]` = `⟨T e_{j−N}, e_{i−N}⟩`.
    entries: Vec<Complex64>,
    /// Max `|A_ij − conj(A_ji)|` before symmetrization.
    pub asymmetry: f64,
}

impl TruncatedOperator {
    /// Wraps a raw matrix, replacing it by its Hermitian part.
    pub fn from_entries(cfg: FockConfig, cut: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 2 * cut + 1;
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter {
                name: "entries",
                reason: "length must be (2N+1)²",
            });
        }
        let mut m = entries;
        let mut asymmetry: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                let a = m[i * dim + j];
                let b = m[j * dim + i];
                asymmetry = asymmetry.max((a - b.conj()).norm());
                let h = (a + b.conj()) * 0.5;
                m[i * dim + j] = h;
                m[j * dim + i] = h.conj();
            }
        }
        if asymmetry.is_nan() || asymmetry > ASYMMETRY_TOLERANCE {
            return Err(Error::Asymmetric {
                asymmetry,
                tolerance: ASYMMETRY_TOLERANCE,
            });
        }
        Ok(Self {
            cfg,
            cut,
            entries: m,
            asymmetry,
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.cut + 1
    }

    /// Entry at matrix position `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    /// `⟨T e_n, e_m⟩` by basis indices.
    pub fn entry(&self, m: i64, n: i64) -> Complex64 {
        let c = self.cut as i64;
        self.get((m + c) as usize, (n + c) as usize)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        compensated_sum((0..self.dim()).map(|i| self.get(i, i).re))
    }

    /// `v* A v` for coordinates `v` in the truncated basis.
    pub fn form(&self, v: &[Complex64]) -> f64 {
        let dim = self.dim();
        assert_eq!(v.len(), dim, "vector length must be 2N+1");
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            let row: Complex64 = self.entries[i * dim..(i + 1) * dim].iter().zip(v).map(|(a, x)| a * x).sum();
            acc += vi.conj() * row;
        }
        acc.re
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let dim = self.dim();
        let mut best: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    best = best.max(self.get(i, j).norm());
                }
            }
        }
        best
    }
}

/// Accumulates `Σ_k w_k row_k row_k*` over nodes, upper triangle only.
fn assemble_nodes(cfg: &FockConfig, nodes: &[Node], cut: usize) -> Result<TruncatedOperator> {
    let dim = 2 * cut + 1;
    let ln_fact = ln_factorials(cut);
    let mut acc = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
    for node in nodes {
        if !(node.weight.is_finite() && node.weight >= 0.0) {
            return Err(Error::NonFiniteSample {
                x: node.point.re,
                y: node.point.im,
                value: node.weight,
            });
        }
        if node.weight == 0.0 {
            continue;
        }
        let row = reduced_basis_row(cfg, node.point, cut, &ln_fact);
        for i in 0..dim {
            let left = row[i].conj() * node.weight;
            if left.norm_sqr() == 0.0 {
                continue;
            }
            for j in i..dim {
                acc[i * dim + j] += left * row[j];
            }
        }
    }
    for i in 0..dim {
        for j in 0..i {
            acc[i * dim + j] = acc[j * dim + i].conj();
        }
    }
    TruncatedOperator::from_entries(*cfg, cut, acc)
}

/// `T_μ` truncated to `|n| ≤ cut`.
pub fn assemble(cfg: &FockConfig, mu: &Measure, cut: usize, quad: &QuadratureSpec) -> Result<TruncatedOperator> {
    assemble_nodes(cfg, &mu.nodes(quad)?, cut)
}

/// Plane nodes for a symbol operator, widened so that every `|e_n|² e^{-α|u|²}`
/// with `|n| ≤ cut` is resolved.
fn symbol_nodes<F>(cfg: &FockConfig, cut: usize, quad: &QuadratureSpec, mut phi: F) -> Result<Vec<Node>>
where
    F: FnMut(ComplexPoint) -> Result<f64>,
{
    quad.validate()?;
    let radius = quad.radius.max(radius_for_cut(cfg.alpha, cut));
    let scale = cfg.alpha / PI;
    let mut nodes = Vec::new();
    for n in quad.square_nodes(radius) {
        let v = phi(n.point)?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::NonFiniteSample {
                x: n.point.re,
                y: n.point.im,
                value: v,
            });
        }
        if v > 0.0 {
            nodes.push(Node {
                point: n.point,
                weight: n.weight * scale * v,
            });
        }
    }
    Ok(nodes)
}

/// `T_φ`, i.e. `T_μ` for `dμ = (α/π) φ dA`.
pub fn assemble_symbol(cfg: &FockConfig, phi: &DensityProfile, cut: usize, quad: &QuadratureSpec) -> Result<TruncatedOperator> {
    phi.validate()?;
    assemble_with_symbol_fn(cfg, cut, quad, |z| Ok(phi.value(z)))
}

/// `T_φ` for a pointwise symbol `φ ≥ 0`.
pub fn assemble_with_symbol_fn<F>(cfg: &FockConfig, cut: usize, quad: &QuadratureSpec, phi: F) -> Result<TruncatedOperator>
where
    F: FnMut(ComplexPoint) -> Result<f64>,
{
    assemble_nodes(cfg, &symbol_nodes(cfg, cut, quad, phi)?, cut)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SpectralData {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub cut: usize,
    pub sweeps: usize,
    /// Off-diagonal norm left by the eigensolver.
    pub off_norm: f64,
    /// `|Σλ − tr A|`.
    pub trace_gap: f64,
}

impl SpectralData {
    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub fn spectrum(op: &TruncatedOperator) -> Result<SpectralData> {
    let out = hermitian_eigenvalues(op.entries(), op.dim())?;
    let sum = compensated_sum(out.eigenvalues.iter().copied());
    Ok(SpectralData {
        trace_gap: (sum - op.trace()).abs(),
        eigenvalues: out.eigenvalues,
        cut: op.cut,
        sweeps: out.sweeps,
        off_norm: out.off_norm,
    })
}

/// `(Σ λ^p)^{1/p}`, or `λ_max` for `p = ∞`.
///
/// Eigenvalues above `−1e-10 · max(1, λ_max)` are clamped to zero; anything
/// lower is rejected as an assembly defect.
pub fn schatten_norm(spec: &SpectralData, p: f64) -> Result<f64> {
    exponent("p", p)?;
    let top = spec.max().max(0.0);
    let tolerance = CLAMP_TOLERANCE * top.max(1.0);
    let mut clamped = Vec::with_capacity(spec.eigenvalues.len());
    for &l in &spec.eigenvalues {
        if l < -tolerance {
            return Err(Error::NegativeEigenvalue { value: l, tolerance });
        }
        clamped.push(l.max(0.0));
    }
    if p.is_infinite() {
        return Ok(top);
    }
    if top == 0.0 {
        return Ok(0.0);
    }
    // scale by λ_max so large p does not overflow
    let sum = compensated_sum(clamped.iter().map(|l| (l / top).powf(p)));
    Ok(top * sum.powf(1.0 / p))
}

/// Side-by-side trace quantities of a truncated `T_μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TraceIdentity {
    pub matrix_trace: f64,
    /// `∫ Σ_{|n| ≤ N} |e_n(u)|² e^{-α|u|²} dμ(u)`.
    pub kernel_integral: f64,
    pub total_mass: f64,
    pub truncated: bool,
    /// `(2α/π) ∫ μ̃ dA`.
    pub berezin_integral: f64,
    /// `(α/π) ∫ μ̃ dA`.
    pub berezin_integral_half: f64,
}

/// `Σ_{|n| ≤ cut} |e_n(u)|² e^{-α|u|²} = e^{-x}(1 + 2 Σ_{k=1}^{cut} x^k/k!)`
/// with `x = α|u|²`.
fn partial_kernel_diagonal(alpha: f64, u: ComplexPoint, cut: usize) -> f64 {
    let x = alpha * u.norm_sqr();
    let mut term = (-x).exp();
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for k in 1..=cut {
        term *= x / k as f64;
        acc.add(2.0 * term);
        if term == 0.0 {
            break;
        }
    }
    acc.value()
}

/// Outer rule for `∫ μ̃ dA`.
const BEREZIN_INTEGRAL_NODES: usize = 96;
/// Finest inner midpoint cell (times `1/√α`) used for `μ̃` inside that rule.
const BEREZIN_INTEGRAL_STEP: f64 = 0.2;

pub fn trace_identity_check(cfg: &FockConfig, mu: &Measure, cut: usize, quad: &QuadratureSpec) -> Result<TraceIdentity> {
    trace_identity_of(&assemble(cfg, mu, cut, quad)?, mu, quad)
}

/// [`trace_identity_check`] for an operator already assembled from `mu`.
pub fn trace_identity_of(op: &TruncatedOperator, mu: &Measure, quad: &QuadratureSpec) -> Result<TraceIdentity> {
    let (cfg, cut) = (&op.cfg, op.cut);
    let nodes = mu.nodes(quad)?;
    let kernel_integral = integrate_nodes(&nodes, |u| partial_kernel_diagonal(cfg.alpha, u, cut))?;
    let mass = total_mass(mu, quad)?;
    let outer = QuadratureSpec::for_alpha(cfg.alpha, mu.extent()).gauss_legendre(BEREZIN_INTEGRAL_NODES);
    let mut inner = *quad;
    inner.step = inner.step.max(BEREZIN_INTEGRAL_STEP / cfg.alpha.sqrt());
    inner.nodes_per_axis = inner.nodes_per_axis.min(BEREZIN_INTEGRAL_NODES);
    let transform = BerezinTransform::new(cfg, mu, &inner)?;
    let integral = integrate_nodes(&outer.plane_nodes(), |z| transform.at(z).unwrap_or(f64::NAN))?;
    Ok(TraceIdentity {
        matrix_trace: op.trace(),
        kernel_integral,
        total_mass: mass.value,
        truncated: mass.truncated,
        berezin_integral: 2.0 * cfg.alpha / PI * integral,
        berezin_integral_half: cfg.alpha / PI * integral,
    })
}

/// `⟨T_μ f, f⟩` computed from the matrix and directly as `∫ |f|² e^{-α|u|²} dμ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub matrix: f64,
    pub direct: f64,
}

pub fn quadratic_form(op: &TruncatedOperator, mu: &Measure, f: &HarmonicPoly, quad: &QuadratureSpec) -> Result<QuadraticForm> {
    let v = f.basis_coordinates(&op.cfg, op.cut)?;
    let a = op.cfg.alpha;
    let direct = integrate_nodes(&mu.nodes(quad)?, |u| f.eval(u).norm_sqr() * (-a * u.norm_sqr()).exp())?;
    Ok(QuadraticForm {
        matrix: op.form(&v),
        direct,
    })
}

/// Empirical constant of `T_μ ≤ C T_ν` with `dν = μ̂_r dA`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Domination {
    pub max_ratio: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

/// Forms below this are treated as degenerate.
const DEGENERATE_FORM: f64 = 1e-14;

/// Max of `⟨T_μ v, v⟩ / ⟨T_ν v, v⟩` over every basis vector and `trials`
/// seeded random vectors, where `T_ν` has symbol `(π/α) μ̂_r`.
pub fn domination_check(
    cfg: &FockConfig,
    mu: &Measure,
    r: f64,
    cut: usize,
    trials: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<Domination> {
    positive("r", r)?;
    let t_mu = assemble(cfg, mu, cut, quad)?;
    let scale = PI / cfg.alpha;
    let t_nu = assemble_with_symbol_fn(cfg, cut, quad, |z| Ok(scale * avg_function(mu, z, r, quad)?))?;
    let dim = 2 * cut + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Domination {
        max_ratio: 0.0,
        evaluated: 0,
        skipped: 0,
    };
    let probe = |v: &[Complex64], out: &mut Domination| {
        let num = t_mu.form(v);
        let den = t_nu.form(v);
        if num.abs() < DEGENERATE_FORM && den.abs() < DEGENERATE_FORM {
            out.skipped += 1;
            return;
        }
        out.evaluated += 1;
        let ratio = if den > 0.0 { num / den } else { f64::INFINITY };
        out.max_ratio = out.max_ratio.max(ratio);
    };
    for i in 0..dim {
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); dim];
        v[i] = Complex64::new(1.0, 0.0);
        probe(&v, &mut out);
    }
    for _ in 0..trials {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        probe(&v, &mut out);
    }
    Ok(out)
}
