//! Numeric evidence for the Carleson, vanishing-Carleson, boundedness,
//! compactness and Schatten-class characterizations of `T_μ`.
//!
//! Every arm is a finite proxy for an asymptotic statement and carries its
//! own decision rule:
//!
//! * growth rule: the quantity at the largest parameter (window `1.5W`, cut,
//!   lattice extent) against the previous one. Relative change below 5 % is
//!   "satisfied", above 20 % "violated", otherwise "inconclusive";
//! * decay rule: last value of a radial profile over its max. Below `1e-3`
//!   is "satisfied", above `0.1` "violated", otherwise "inconclusive".
//!
//! The overall verdict is the common verdict of all arms, or
//! "inconclusive" when they disagree.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::berezin::{radial_decay_profile, BerezinTransform, GridSpec, ScalarField};
use crate::error::{exponent, positive, Error, Result};
use crate::kernel::{normalized_kernel_norm_sq_exact, FockConfig};
use crate::measure::{ball_mass, lattice_points, ComplexPoint, DensityProfile, LatticeSpec, Measure};
use crate::operator::{assemble, assemble_symbol, schatten_norm, spectrum};
use crate::quadrature::{compensated_sum, integrate_nodes, QuadratureSpec};

pub const GROWTH_SATISFIED: f64 = 0.05;
pub const GROWTH_VIOLATED: f64 = 0.20;
pub const DECAY_SATISFIED: f64 = 1e-3;
pub const DECAY_VIOLATED: f64 = 0.1;
/// Ratio between the outer and inner probe windows.
pub const WINDOW_GROWTH: f64 = 1.5;
/// Margins are reported up to this value.
pub const MARGIN_CAP: f64 = 1e6;
/// Largest `|n|` of the basis vectors in the embedding test family.
pub const EMBEDDING_DEGREE: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ReportKind {
    Carleson,
    Vanishing,
    Bounded,
    Compact,
    Schatten,
    SymbolSchatten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Rule {
    Growth,
    Decay,
}

impl Rule {
    /// `(satisfied below, violated above)`.
    pub fn thresholds(self) -> (f64, f64) {
        match self {
            Rule::Growth => (GROWTH_SATISFIED, GROWTH_VIOLATED),
            Rule::Decay => (DECAY_SATISFIED, DECAY_VIOLATED),
        }
    }

    /// Verdict and margin for a statistic.
    pub fn decide(self, statistic: f64) -> (Verdict, f64) {
        let (lo, hi) = self.thresholds();
        if statistic.is_nan() {
            (Verdict::Inconclusive, 1.0)
        } else if statistic < lo {
            let m = if statistic > 0.0 { lo / statistic } else { MARGIN_CAP };
            (Verdict::Satisfied, m.min(MARGIN_CAP))
        } else if statistic > hi {
            (Verdict::Violated, (statistic / hi).min(MARGIN_CAP))
        } else {
            (Verdict::Inconclusive, 1.0)
        }
    }
}

/// Relative change `|last − prev| / |prev|`; zero when both vanish.
pub fn relative_growth(prev: f64, last: f64) -> f64 {
    if prev == last {
        0.0
    } else if prev == 0.0 {
        f64::INFINITY
    } else {
        (last - prev).abs() / prev.abs()
    }
}

/// `last / max` of a profile; zero for an identically zero profile.
pub fn decay_ratio(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    match values.last() {
        Some(&last) if max > 0.0 => last / max,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Sample {
    pub parameter: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Arm {
    pub id: &'static str,
    pub quantity: &'static str,
    /// Meaning of `Sample::parameter`.
    pub parameter: &'static str,
    pub samples: Vec<Sample>,
    pub rule: Rule,
    pub thresholds: (f64, f64),
    pub statistic: f64,
    pub verdict: Verdict,
    pub margin: f64,
}

impl Arm {
    fn new(id: &'static str, quantity: &'static str, parameter: &'static str, samples: Vec<Sample>, rule: Rule) -> Self {
        let statistic = match rule {
            Rule::Growth => match samples.as_slice() {
                [.., a, b] => relative_growth(a.value, b.value),
                _ => f64::NAN,
            },
            Rule::Decay => decay_ratio(&samples.iter().map(|s| s.value).collect::<Vec<_>>()),
        };
        Self::with_statistic(id, quantity, parameter, samples, rule, statistic)
    }

    fn with_statistic(
        id: &'static str,
        quantity: &'static str,
        parameter: &'static str,
        samples: Vec<Sample>,
        rule: Rule,
        statistic: f64,
    ) -> Self {
        let (verdict, margin) = rule.decide(statistic);
        Self {
            id,
            quantity,
            parameter,
            samples,
            rule,
            thresholds: rule.thresholds(),
            statistic,
            verdict,
            margin,
        }
    }

    /// Value at the largest parameter.
    pub fn last(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.value)
    }
}

/// A reported inequality.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Check {
    pub name: &'static str,
    pub parameter: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `lhs / rhs` between the final values of two arms; `None` when undefined.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Ratio {
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub value: Option<f64>,
}

/// A named auxiliary number.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Quantity {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Report {
    pub kind: ReportKind,
    pub measure: String,
    pub config: FockConfig,
    pub arms: Vec<Arm>,
    pub checks: Vec<Check>,
    pub ratios: Vec<Ratio>,
    pub extras: Vec<Quantity>,
    pub verdict: Verdict,
}

impl Report {
    fn new(kind: ReportKind, measure: String, config: FockConfig, arms: Vec<Arm>) -> Self {
        let verdict = combine(arms.iter().map(|a| a.verdict));
        let mut ratios = Vec::new();
        for (i, a) in arms.iter().enumerate() {
            for b in &arms[i + 1..] {
                ratios.push(ratio(a, b));
            }
        }
        Self {
            kind,
            measure,
            config,
            arms,
            checks: Vec::new(),
            ratios,
            extras: Vec::new(),
            verdict,
        }
    }

    pub fn arm(&self, id: &str) -> Option<&Arm> {
        self.arms.iter().find(|a| a.id == id)
    }

    /// No arm is satisfied with margin above 100 while another is violated
    /// with margin above 100.
    pub fn consistent(&self) -> bool {
        let strong = |v: Verdict| self.arms.iter().any(|a| a.verdict == v && a.margin > 100.0);
        !(strong(Verdict::Satisfied) && strong(Verdict::Violated))
    }
}

fn ratio(a: &Arm, b: &Arm) -> Ratio {
    let (x, y) = (a.last(), b.last());
    let value = if x == 0.0 && y == 0.0 {
        Some(1.0)
    } else {
        Some(x / y).filter(|v| v.is_finite())
    };
    Ratio {
        lhs: a.id,
        rhs: b.id,
        value,
    }
}

fn combine<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
    let mut it = verdicts.into_iter();
    let first = match it.next() {
        Some(v) => v,
        None => return Verdict::Inconclusive,
    };
    if it.all(|v| v == first) {
        first
    } else {
        Verdict::Inconclusive
    }
}

/// Short human-readable summary of a measure.
pub fn describe(mu: &Measure) -> String {
    match mu {
        Measure::Atomic { atoms } => {
            let mass = compensated_sum(atoms.iter().map(|a| a.weight));
            format!("atomic, {} atoms, mass {:e}", atoms.len(), mass)
        }
        Measure::Density {
            profile,
            support_radius,
        } => format!("density {:?} on |z| < {}", profile, support_radius),
    }
}

/// Square probe windows `[-W, W]²` and `[-1.5W, 1.5W]²` sampled with a
/// common step.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Probe {
    pub window: f64,
    pub step: f64,
}

impl Probe {
    pub fn new(window: f64, step: f64) -> Result<Self> {
        positive("window", window)?;
        positive("probe step", step)?;
        Ok(Self { window, step })
    }

    /// Default probe for `μ`: `W = max(extent/2, 2/√α)`, step `0.25/√α`.
    ///
    /// Only half the extent is used so that the outer window still sees
    /// the measure, which is how growth of a sampled family shows up.
    pub fn for_measure(cfg: &FockConfig, mu: &Measure) -> Self {
        let s = cfg.alpha.sqrt();
        Self {
            window: (0.5 * mu.extent()).max(2.0 / s),
            step: 0.25 / s,
        }
    }

    /// Default probe for a symbol: `W = clamp(reach/2, 3/√α, 6/√α)`.
    pub fn for_symbol(cfg: &FockConfig, phi: &DensityProfile) -> Self {
        let s = cfg.alpha.sqrt();
        Self {
            window: (0.5 * phi.reach()).clamp(3.0 / s, 6.0 / s),
            step: 0.25 / s,
        }
    }

    pub fn outer(&self) -> f64 {
        WINDOW_GROWTH * self.window
    }

    /// The grid of the outer window.
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::centered(self.outer(), self.step)
    }

    pub fn windows(&self) -> [f64; 2] {
        [self.window, self.outer()]
    }
}

fn inside(z: ComplexPoint, window: f64) -> bool {
    let w = window * (1.0 + 1e-12);
    z.re.abs() <= w && z.im.abs() <= w
}

/// Sup and `L^p` norm of a field restricted to `[-W, W]²`.
fn window_stats(field: &ScalarField, window: f64, p: f64) -> (f64, f64) {
    let values: Vec<f64> = field.iter().filter(|(z, _)| inside(*z, window)).map(|(_, v)| v).collect();
    let sup = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let lp = if p.is_infinite() {
        sup
    } else {
        (compensated_sum(values.iter().map(|v| v.abs().powf(p))) * field.grid.cell_area()).powf(1.0 / p)
    };
    (sup, lp)
}

fn window_samples<F: Fn(f64) -> f64>(probe: &Probe, f: F) -> Vec<Sample> {
    probe
        .windows()
        .iter()
        .map(|&w| Sample {
            parameter: w,
            value: f(w),
        })
        .collect()
}

fn berezin_field(transform: &BerezinTransform, probe: &Probe) -> Result<ScalarField> {
    ScalarField::sample(probe.grid()?, "berezin", |z| transform.at(z))
}

fn ball_field(mu: &Measure, r: f64, probe: &Probe, quad: &QuadratureSpec) -> Result<ScalarField> {
    ScalarField::sample(probe.grid()?, "ball mass", |z| ball_mass(mu, z, r, quad))
}

fn check_cuts(cuts: &[usize]) -> Result<()> {
    if cuts.len() < 2 || cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "trunc",
            reason: "needs at least two strictly ascending cuts",
        });
    }
    Ok(())
}

/// Default cuts `[⌈N/2⌉, N]` with `N` from [`crate::operator::default_cut`],
/// capped at `cap`.
pub fn default_cuts(cfg: &FockConfig, mu: &Measure, cap: usize) -> Vec<usize> {
    let n = crate::operator::default_cut(cfg.alpha, mu.extent()).min(cap).max(2);
    alloc::vec![n.div_ceil(2), n]
}

/// Default radii: eight equally spaced values from 0 to the outer window.
pub fn default_radii(probe: &Probe) -> Vec<f64> {
    (0..8).map(|k| probe.outer() * k as f64 / 7.0).collect()
}

/// Fock–Carleson evidence: ball masses, the embedding ratio for `p = 2`
/// and the Berezin transform.
pub fn carleson_report(cfg: &FockConfig, mu: &Measure, r: f64, probe: &Probe, quad: &QuadratureSpec) -> Result<Report> {
    positive("r", r)?;
    quad.validate()?;
    let transform = BerezinTransform::new(cfg, mu, quad)?;
    let balls = ball_field(mu, r, probe, quad)?;
    let berezin = berezin_field(&transform, probe)?;

    // lattice points of spacing r inside the outer window
    let m = (probe.outer() / r).floor() as usize;
    let lattice = LatticeSpec::new(r, m)?;
    let mut lattice_masses = Vec::new();
    for a in lattice_points(&lattice) {
        lattice_masses.push((a, ball_mass(mu, a, r, quad)?));
    }
    let ball_sup = |w: f64| {
        let grid = window_stats(&balls, w, f64::INFINITY).0;
        let lat = lattice_masses
            .iter()
            .filter(|(a, _)| inside(*a, w))
            .map(|(_, v)| *v)
            .fold(0.0, f64::max);
        grid.max(lat)
    };

    // embedding family: e_n for |n| ≤ 5, and h_w on a grid of step 1/√α
    let nodes = mu.nodes(quad)?;
    let ln_fact = crate::kernel::ln_factorials(EMBEDDING_DEGREE as usize);
    let area = PI / cfg.alpha;
    let mut basis_ratio: f64 = 0.0;
    for n in -EMBEDDING_DEGREE..=EMBEDDING_DEGREE {
        let i = (n + EMBEDDING_DEGREE) as usize;
        let num = integrate_nodes(&nodes, |u| {
            crate::kernel::reduced_basis_row(cfg, u, EMBEDDING_DEGREE as usize, &ln_fact)[i].norm_sqr()
        })?;
        basis_ratio = basis_ratio.max(num / area);
    }
    let coarse = GridSpec::centered(probe.outer(), 1.0 / cfg.alpha.sqrt())?;
    let mut kernel_ratios = Vec::new();
    for w in coarse.points() {
        let num = transform.at(w)?;
        kernel_ratios.push((w, num / (area * normalized_kernel_norm_sq_exact(cfg, w))));
    }
    let embed = |win: f64| {
        kernel_ratios
            .iter()
            .filter(|(w, _)| inside(*w, win))
            .map(|(_, v)| *v)
            .fold(basis_ratio, f64::max)
    };

    let arms = alloc::vec![
        Arm::new("a", "sup ball mass", "window", window_samples(probe, ball_sup), Rule::Growth),
        Arm::new("b", "embedding ratio (p = 2)", "window", window_samples(probe, embed), Rule::Growth),
        Arm::new(
            "c",
            "sup berezin transform",
            "window",
            window_samples(probe, |w| window_stats(&berezin, w, f64::INFINITY).0),
            Rule::Growth
        ),
    ];
    let mut report = Report::new(ReportKind::Carleson, describe(mu), *cfg, arms);
    report.extras.push(Quantity { name: "r", value: r });
    Ok(report)
}

fn profile_samples(profile: Vec<(f64, f64)>) -> Vec<Sample> {
    profile
        .into_iter()
        .map(|(parameter, value)| Sample { parameter, value })
        .collect()
}

fn vanishing_arms(cfg: &FockConfig, mu: &Measure, r: f64, radii: &[f64], quad: &QuadratureSpec) -> Result<Vec<Arm>> {
    positive("r", r)?;
    if radii.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "radii",
            reason: "needs at least three values",
        });
    }
    let transform = BerezinTransform::new(cfg, mu, quad)?;
    let balls = radial_decay_profile(radii, |z| ball_mass(mu, z, r, quad))?;
    let berezin = radial_decay_profile(radii, |z| transform.at(z))?;
    Ok(alloc::vec![
        Arm::new("b", "ball mass radial profile", "radius", profile_samples(balls), Rule::Decay),
        Arm::new("c", "berezin radial profile", "radius", profile_samples(berezin), Rule::Decay),
    ])
}

/// Vanishing Fock–Carleson evidence: radial decay of `μ(B(z, r))` and `μ̃`.
pub fn vanishing_report(cfg: &FockConfig, mu: &Measure, r: f64, radii: &[f64], quad: &QuadratureSpec) -> Result<Report> {
    let arms = vanishing_arms(cfg, mu, r, radii, quad)?;
    let mut report = Report::new(ReportKind::Vanishing, describe(mu), *cfg, arms);
    report.extras.push(Quantity { name: "r", value: r });
    Ok(report)
}

/// Boundedness evidence: `λ_max` across cuts and `sup μ̃` across windows,
/// with the check `sup μ̃ ≤ 2 λ_max` at every cut.
pub fn boundedness_report(
    cfg: &FockConfig,
    mu: &Measure,
    cuts: &[usize],
    probe: &Probe,
    quad: &QuadratureSpec,
) -> Result<Report> {
    check_cuts(cuts)?;
    let mut norms = Vec::new();
    for &n in cuts {
        let s = spectrum(&assemble(cfg, mu, n, quad)?)?;
        norms.push(Sample {
            parameter: n as f64,
            value: schatten_norm(&s, f64::INFINITY)?,
        });
    }
    let transform = BerezinTransform::new(cfg, mu, quad)?;
    let berezin = berezin_field(&transform, probe)?;
    let sups = window_samples(probe, |w| window_stats(&berezin, w, f64::INFINITY).0);
    let sup = sups.last().map_or(0.0, |s| s.value);
    let checks = norms
        .iter()
        .map(|s| Check {
            name: "sup berezin <= 2 operator norm",
            parameter: s.parameter,
            lhs: sup,
            rhs: 2.0 * s.value,
            holds: sup <= 2.0 * s.value * (1.0 + 1e-9),
        })
        .collect();
    let arms = alloc::vec![
        Arm::new("a", "operator norm", "cut", norms, Rule::Growth),
        Arm::new("b", "sup berezin transform", "window", sups, Rule::Growth),
    ];
    let mut report = Report::new(ReportKind::Bounded, describe(mu), *cfg, arms);
    report.checks = checks;
    Ok(report)
}

/// Compactness evidence: the eigenvalue at the middle of the truncated
/// spectrum relative to `λ_max`, together with the vanishing arms.
pub fn compactness_report(
    cfg: &FockConfig,
    mu: &Measure,
    cuts: &[usize],
    r: f64,
    radii: &[f64],
    quad: &QuadratureSpec,
) -> Result<Report> {
    check_cuts(cuts)?;
    let mut tails = Vec::new();
    let mut tops = Vec::new();
    for &n in cuts {
        let s = spectrum(&assemble(cfg, mu, n, quad)?)?;
        let top = s.max();
        let mid = s.eigenvalues[s.eigenvalues.len() / 2].max(0.0);
        tails.push(Sample {
            parameter: n as f64,
            value: if top > 0.0 { mid / top } else { 0.0 },
        });
        tops.push(top);
    }
    // the decision uses the largest cut only
    let last = tails.last().map_or(0.0, |s| s.value);
    let decay = Arm::with_statistic("a", "median over largest eigenvalue", "cut", tails, Rule::Decay, last);
    let mut arms = alloc::vec![decay];
    arms.extend(vanishing_arms(cfg, mu, r, radii, quad)?);
    let mut report = Report::new(ReportKind::Compact, describe(mu), *cfg, arms);
    let k = tops.len();
    report.extras.push(Quantity {
        name: "largest eigenvalue relative change",
        value: relative_growth(tops[k - 2], tops[k - 1]),
    });
    report.extras.push(Quantity { name: "r", value: r });
    Ok(report)
}

fn schatten_samples<F>(cuts: &[usize], p: f64, mut op: F) -> Result<Vec<Sample>>
where
    F: FnMut(usize) -> Result<crate::operator::TruncatedOperator>,
{
    let mut out = Vec::new();
    for &n in cuts {
        out.push(Sample {
            parameter: n as f64,
            value: schatten_norm(&spectrum(&op(n)?)?, p)?,
        });
    }
    Ok(out)
}

/// Schatten-`p` evidence for `T_μ`: the Schatten norm across cuts, the
/// `L^p` norms of `μ̃` and `μ̂_r` across windows and the `l^p` norm of the
/// lattice ball masses across lattice extents `M` and `⌈1.5M⌉`.
#[allow(clippy::too_many_arguments)]
pub fn schatten_report(
    cfg: &FockConfig,
    mu: &Measure,
    p: f64,
    r: f64,
    lattice: &LatticeSpec,
    cuts: &[usize],
    probe: &Probe,
    quad: &QuadratureSpec,
) -> Result<Report> {
    exponent("p", p)?;
    positive("r", r)?;
    check_cuts(cuts)?;
    let schatten = schatten_samples(cuts, p, |n| assemble(cfg, mu, n, quad))?;

    let transform = BerezinTransform::new(cfg, mu, quad)?;
    let berezin = berezin_field(&transform, probe)?;
    let balls = ball_field(mu, r, probe, quad)?;
    let scale = 1.0 / (PI * r * r);

    let outer_extent = ((lattice.extent as f64 * WINDOW_GROWTH).ceil() as usize).max(lattice.extent + 1);
    let mut lattice_samples = Vec::new();
    for m in [lattice.extent, outer_extent] {
        let spec = LatticeSpec::new(lattice.spacing, m)?;
        let mut masses = Vec::new();
        for a in lattice_points(&spec) {
            masses.push(ball_mass(mu, a, r, quad)?);
        }
        let value = if p.is_infinite() {
            masses.iter().copied().fold(0.0, f64::max)
        } else {
            compensated_sum(masses.iter().map(|v| v.powf(p))).powf(1.0 / p)
        };
        lattice_samples.push(Sample {
            parameter: m as f64,
            value,
        });
    }

    let arms = alloc::vec![
        Arm::new("a", "schatten norm", "cut", schatten, Rule::Growth),
        Arm::new(
            "b",
            "berezin L^p norm",
            "window",
            window_samples(probe, |w| window_stats(&berezin, w, p).1),
            Rule::Growth
        ),
        Arm::new(
            "c",
            "averaging function L^p norm",
            "window",
            window_samples(probe, |w| scale * window_stats(&balls, w, p).1),
            Rule::Growth
        ),
        Arm::new("d", "lattice ball mass l^p norm", "lattice extent", lattice_samples, Rule::Growth),
    ];
    let mut report = Report::new(ReportKind::Schatten, describe(mu), *cfg, arms);
    report.extras.push(Quantity { name: "p", value: p });
    report.extras.push(Quantity { name: "r", value: r });
    Ok(report)
}

/// Schatten-`p` evidence for `T_φ`, with the bound
/// `‖T_φ‖_{S_p}^p ≤ (2α/π) ∫ φ^p dA` checked at every cut.
///
/// The averaging arm uses `φ̂_r = (πr²)^{-1} ∫_{B(z,r)} φ dA`; the variant
/// normalized by `(πα)^{-1}` is listed among the extras.
pub fn symbol_schatten_report(
    cfg: &FockConfig,
    phi: &DensityProfile,
    p: f64,
    r: f64,
    cuts: &[usize],
    probe: &Probe,
    quad: &QuadratureSpec,
) -> Result<Report> {
    exponent("p", p)?;
    positive("r", r)?;
    check_cuts(cuts)?;
    phi.validate()?;
    quad.validate()?;
    let schatten = schatten_samples(cuts, p, |n| assemble_symbol(cfg, phi, n, quad))?;

    let transform = BerezinTransform::of_symbol(cfg, phi, quad)?;
    let berezin = berezin_field(&transform, probe)?;
    let averages = ScalarField::sample(probe.grid()?, "symbol average", |z| {
        integrate_nodes(&quad.disc_nodes(z, r), |u| phi.value(u))
    })?;
    let scale = 1.0 / (PI * r * r);

    let bound = if p.is_infinite() {
        phi.sup()
    } else {
        2.0 * cfg.alpha / PI * integrate_nodes(&quad.plane_nodes(), |z| phi.value(z).powf(p))?
    };
    let checks = schatten
        .iter()
        .map(|s| {
            let lhs = if p.is_infinite() { s.value } else { s.value.powf(p) };
            Check {
                name: "schatten norm^p <= (2 alpha / pi) integral of phi^p",
                parameter: s.parameter,
                lhs,
                rhs: bound,
                holds: lhs <= bound * (1.0 + 1e-9),
            }
        })
        .collect();

    let average_norms = window_samples(probe, |w| scale * window_stats(&averages, w, p).1);
    let alt = average_norms.last().map_or(0.0, |s| s.value) * r * r / cfg.alpha;
    let arms = alloc::vec![
        Arm::new("a", "schatten norm", "cut", schatten, Rule::Growth),
        Arm::new(
            "b",
            "berezin L^p norm",
            "window",
            window_samples(probe, |w| window_stats(&berezin, w, p).1),
            Rule::Growth
        ),
        Arm::new("c", "averaging function L^p norm", "window", average_norms, Rule::Growth),
    ];
    let mut report = Report::new(ReportKind::SymbolSchatten, format!("symbol {:?}", phi), *cfg, arms);
    report.checks = checks;
    report.extras.push(Quantity { name: "p", value: p });
    report.extras.push(Quantity { name: "r", value: r });
    report.extras.push(Quantity {
        name: "bound (2 alpha / pi) integral of phi^p",
        value: bound,
    });
    report.extras.push(Quantity {
        name: "averaging L^p norm, 1/(pi alpha) normalization",
        value: alt,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Convention;
    use num_complex::Complex64 as C;

    fn basis() -> FockConfig {
        FockConfig::new(1.0, Convention::BasisSum).unwrap()
    }

    fn fast_quad() -> QuadratureSpec {
        QuadratureSpec {
            disc_radial: 16,
            disc_angular: 48,
            ..QuadratureSpec::for_alpha(1.0, 0.0).with_step(0.1)
        }
    }

    fn dirac() -> Measure {
        Measure::dirac(C::new(0.0, 0.0))
    }

    fn lebesgue() -> Measure {
        Measure::density(DensityProfile::Constant { c: 1.0 / PI }, 12.0).unwrap()
    }

    fn lattice(beta: f64, grow: bool) -> Measure {
        let spec = LatticeSpec::new(1.0, 4).unwrap();
        Measure::lattice_from_fn(&spec, |a| if grow { a.norm().exp() } else { (-beta * a.norm_sqr()).exp() }).unwrap()
    }

    fn coarse_probe() -> Probe {
        Probe::new(3.0, 0.5).unwrap()
    }

    #[test]
    fn rules() {
        assert_eq!(Rule::Growth.decide(0.01).0, Verdict::Satisfied);
        assert_eq!(Rule::Growth.decide(0.1).0, Verdict::Inconclusive);
        assert_eq!(Rule::Growth.decide(0.3).0, Verdict::Violated);
        assert_eq!(Rule::Decay.decide(0.0), (Verdict::Satisfied, MARGIN_CAP));
        assert_eq!(relative_growth(0.0, 0.0), 0.0);
        assert_eq!(relative_growth(0.0, 1.0), f64::INFINITY);
        assert_eq!(combine([Verdict::Satisfied, Verdict::Violated]), Verdict::Inconclusive);
    }

    #[test]
    fn carleson_examples() {
        let cfg = basis();
        let q = fast_quad();
        let d = carleson_report(&cfg, &dirac(), 1.0, &coarse_probe(), &q).unwrap();
        assert_eq!(d.verdict, Verdict::Satisfied);
        assert_eq!(d.arm("a").unwrap().last(), 1.0);
        assert!((d.arm("c").unwrap().last() - 1.0).abs() < 1e-12);
        assert_eq!(d.arms.len(), 3);
        assert_eq!(d.ratios.len(), 3);

        let l = carleson_report(&cfg, &lebesgue(), 1.0, &coarse_probe(), &q).unwrap();
        assert_eq!(l.verdict, Verdict::Satisfied);
        assert!((l.arm("a").unwrap().last() - 1.0).abs() < 1e-9);
        assert!((l.arm("c").unwrap().last() - 1.0).abs() < 1e-6);

        let g = lattice(0.0, true);
        let probe = Probe::for_measure(&cfg, &g);
        let v = carleson_report(&cfg, &g, 1.0, &probe, &q).unwrap();
        assert_eq!(v.verdict, Verdict::Violated, "{:?}", v.arms);
        for arm in &v.arms {
            assert!(arm.samples[1].value >= arm.samples[0].value);
        }
    }

    #[test]
    fn carleson_scale_covariance() {
        let cfg = basis();
        let q = fast_quad();
        let mu = lattice(1.0, false);
        let a = carleson_report(&cfg, &mu, 1.0, &coarse_probe(), &q).unwrap();
        let b = carleson_report(&cfg, &mu.scaled(3.0).unwrap(), 1.0, &coarse_probe(), &q).unwrap();
        for (x, y) in a.arms.iter().zip(&b.arms) {
            for (s, t) in x.samples.iter().zip(&y.samples) {
                assert!((t.value - 3.0 * s.value).abs() <= 1e-12 * t.value);
            }
            assert_eq!(x.verdict, y.verdict);
        }
    }

    #[test]
    fn vanishing_examples() {
        let cfg = basis();
        let q = fast_quad();
        let radii = default_radii(&coarse_probe());
        assert_eq!(vanishing_report(&cfg, &dirac(), 1.0, &radii, &q).unwrap().verdict, Verdict::Satisfied);
        assert_eq!(vanishing_report(&cfg, &lebesgue(), 1.0, &radii, &q).unwrap().verdict, Verdict::Violated);
        let mu = lattice(1.0, false);
        let probe = Probe::for_measure(&cfg, &mu);
        let rep = vanishing_report(&cfg, &mu, 1.0, &default_radii(&probe), &q).unwrap();
        assert_eq!(rep.verdict, Verdict::Satisfied, "{:?}", rep.arms);
        assert!(vanishing_report(&cfg, &mu, 1.0, &[0.0, 1.0], &q).is_err());
    }

    #[test]
    fn boundedness_examples() {
        let cfg = basis();
        let q = fast_quad();
        let d = boundedness_report(&cfg, &dirac(), &[5, 10], &coarse_probe(), &q).unwrap();
        assert!(d.arm("a").unwrap().samples.iter().all(|s| (s.value - 1.0).abs() < 1e-12));
        assert!(d.checks.iter().all(|c| c.holds));
        assert_eq!(d.verdict, Verdict::Satisfied);
        let l = boundedness_report(&cfg, &lebesgue(), &[5, 10], &coarse_probe(), &q).unwrap();
        assert!(l.arm("a").unwrap().samples.iter().all(|s| (s.value - 1.0).abs() < 1e-8));
        assert_eq!(l.verdict, Verdict::Satisfied);

        let mu1 = Measure::atomic([(C::new(0.5, 0.5), 1.0)]).unwrap();
        let mu2 = Measure::atomic([(C::new(-1.0, 0.2), 2.0)]).unwrap();
        let both = Measure::atomic([(C::new(0.5, 0.5), 1.0), (C::new(-1.0, 0.2), 2.0)]).unwrap();
        let norm = |m: &Measure| boundedness_report(&cfg, m, &[5, 10], &coarse_probe(), &q).unwrap().arm("a").unwrap().last();
        assert!(norm(&both) <= norm(&mu1) + norm(&mu2) + 1e-12);
        assert!(boundedness_report(&cfg, &dirac(), &[10, 5], &coarse_probe(), &q).is_err());
    }

    #[test]
    fn compactness_examples() {
        let cfg = basis();
        let q = fast_quad();
        let radii = default_radii(&coarse_probe());
        let d = compactness_report(&cfg, &dirac(), &[5, 10], 1.0, &radii, &q).unwrap();
        assert_eq!(d.verdict, Verdict::Satisfied);
        let l = compactness_report(&cfg, &lebesgue(), &[5, 10], 1.0, &radii, &q).unwrap();
        assert_eq!(l.verdict, Verdict::Violated);
        let bump = Measure::density(
            DensityProfile::GaussianBump {
                amplitude: 1.0 / PI,
                center: C::new(0.0, 0.0),
                width: 1.0,
            },
            8.0,
        )
        .unwrap();
        let b = compactness_report(&cfg, &bump, &[20, 40], 1.0, &radii, &q).unwrap();
        assert_eq!(b.verdict, Verdict::Satisfied, "{:?}", b.arms);
        assert!(b.consistent());
    }

    #[test]
    fn schatten_examples() {
        let cfg = basis();
        let q = fast_quad();
        let lat = LatticeSpec::new(1.0, 3).unwrap();
        let d = schatten_report(&cfg, &dirac(), 1.0, 1.0, &lat, &[5, 10], &coarse_probe(), &q).unwrap();
        assert!((d.arm("a").unwrap().last() - 1.0).abs() < 1e-12);
        assert_eq!(d.arm("d").unwrap().last(), 1.0);
        assert_eq!(d.verdict, Verdict::Satisfied, "{:?}", d.arms);

        let l = schatten_report(&cfg, &lebesgue(), 1.0, 1.0, &lat, &[5, 10], &coarse_probe(), &q).unwrap();
        assert_eq!(l.verdict, Verdict::Violated, "{:?}", l.arms);

        let mu = lattice(1.0, false);
        let rep = schatten_report(&cfg, &mu, 2.0, 1.0, &lat, &[10, 20], &coarse_probe(), &q).unwrap();
        for r in &rep.ratios {
            let v = r.value.unwrap();
            assert!(v < 50.0 && v > 1.0 / 50.0, "{:?}", rep.ratios);
        }
        for arm in &rep.arms {
            assert!(arm.samples[1].value >= arm.samples[0].value - 1e-12);
        }
        assert!(rep.consistent());
    }

    #[test]
    fn symbol_examples() {
        let cfg = basis();
        let q = fast_quad();
        let zero = DensityProfile::Constant { c: 0.0 };
        let z = symbol_schatten_report(&cfg, &zero, 1.0, 1.0, &[5, 10], &coarse_probe(), &q).unwrap();
        assert!(z.arms.iter().all(|a| a.samples.iter().all(|s| s.value == 0.0)));
        let bump = DensityProfile::GaussianBump {
            amplitude: 1.0,
            center: C::new(0.0, 0.0),
            width: 1.0,
        };
        let b = symbol_schatten_report(&cfg, &bump, 1.0, 1.0, &[5, 10, 20], &Probe::for_symbol(&cfg, &bump), &q).unwrap();
        assert!((b.extras[2].value - 2.0).abs() < 1e-9);
        assert!(b.checks.iter().all(|c| c.holds));
        assert_eq!(b.verdict, Verdict::Satisfied, "{:?}", b.arms);
        let c = symbol_schatten_report(&cfg, &DensityProfile::Constant { c: 2.0 }, 1.0, 1.0, &[5, 10], &coarse_probe(), &q)
            .unwrap();
        assert_eq!(c.verdict, Verdict::Violated);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = basis();
        let q = fast_quad();
        let mu = lattice(0.5, false);
        let a = carleson_report(&cfg, &mu, 1.0, &coarse_probe(), &q).unwrap();
        let b = carleson_report(&cfg, &mu, 1.0, &coarse_probe(), &q).unwrap();
        assert_eq!(format!("{:?}", a), format!("{:?}", b));
    }
}
