use std::f64::consts::PI;

use hfock_core::berezin::{berezin_at, BerezinTransform, GridSpec};
use hfock_core::criteria::{carleson_report, schatten_report, Probe};
use hfock_core::kernel::{
    basis_function, harmonic_kernel, kernel_pairing, kernel_partial_sum, BasisIndex,
};
use hfock_core::measure::{avg_function, ball_mass, lattice_points, total_mass};
use hfock_core::operator::{assemble, assemble_symbol, quadratic_form, schatten_norm, spectrum};
use hfock_core::quadrature::{integrate_gaussian_complex, integrate_measure, integrate_plane, integrate_plane_with_estimate};
use hfock_core::{Convention, DensityProfile, FockConfig, HarmonicPoly, LatticeSpec, Measure, QuadratureSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn basis(alpha: f64) -> FockConfig {
    FockConfig::new(alpha, Convention::BasisSum).unwrap()
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::for_alpha(1.0, 3.0)
}

fn point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..2.0 * PI).prop_map(move |(t, th)| Complex64::from_polar(radius * t.sqrt(), th))
}

fn atoms(max: usize) -> impl Strategy<Value = Vec<(Complex64, f64)>> {
    prop::collection::vec((point(3.0), 0.01..2.0f64), 1..=max)
}

fn poly(deg: usize) -> impl Strategy<Value = HarmonicPoly> {
    let coeffs = prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), deg + 1);
    (coeffs.clone(), coeffs).prop_map(|(a, b)| {
        let f = |v: Vec<(f64, f64)>| v.into_iter().map(|(x, y)| c(x, y)).collect();
        HarmonicPoly::new(f(a), f(b))
    })
}

fn density_suite() -> Vec<DensityProfile> {
    vec![
        DensityProfile::GaussianBump {
            amplitude: 1.0,
            center: c(0.5, -0.5),
            width: 1.0,
        },
        DensityProfile::DiskIndicator {
            center: c(0.0, 0.0),
            radius: 1.5,
            height: 2.0,
        },
        DensityProfile::Annulus {
            center: c(0.0, 0.0),
            inner: 1.0,
            outer: 2.0,
            height: 1.0,
        },
        DensityProfile::RadialPolyGaussian {
            coefficients: vec![1.0, 0.0, 0.5],
            decay: 1.0,
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_mass_is_additive_over_atoms(a in atoms(6), z in point(3.0), r in 0.1..3.0f64) {
        let q = quad();
        let whole = ball_mass(&Measure::atomic(a.clone()).unwrap(), z, r, &q).unwrap();
        let parts: f64 = a.iter().map(|&(w, m)| ball_mass(&Measure::atomic([(w, m)]).unwrap(), z, r, &q).unwrap()).sum();
        prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + parts));
    }

    #[test]
    fn average_times_area_is_ball_mass(a in atoms(6), z in point(3.0), r in 0.1..3.0f64) {
        let q = quad();
        let mu = Measure::atomic(a).unwrap();
        let m = ball_mass(&mu, z, r, &q).unwrap();
        let avg = avg_function(&mu, z, r, &q).unwrap();
        prop_assert!((avg * PI * r * r - m).abs() <= 1e-14 * (1.0 + m));
    }

    #[test]
    fn total_mass_is_the_large_ball_limit(a in atoms(6)) {
        let q = quad();
        let mu = Measure::atomic(a).unwrap();
        let total = total_mass(&mu, &q).unwrap().value;
        prop_assert!((ball_mass(&mu, c(0.0, 0.0), mu.extent() + 1.0, &q).unwrap() - total).abs() <= 1e-14 * total);
    }

    #[test]
    fn every_point_lies_in_exactly_one_cell(x in -2.4..2.4f64, y in -2.4..2.4f64, r in 0.5..2.0f64) {
        let spec = LatticeSpec::new(r, 3).unwrap();
        let (x, y) = (x * r, y * r);
        let owners: Vec<Complex64> = lattice_points(&spec)
            .into_iter()
            .filter(|a| {
                let (u, v) = ((x - a.re) / r, (y - a.im) / r);
                (-0.5..0.5).contains(&u) && (-0.5..0.5).contains(&v)
            })
            .collect();
        prop_assert_eq!(owners.len(), 1);
        let (n, m) = spec.cell_of(c(x, y));
        prop_assert_eq!(owners[0], c(n as f64 * r, m as f64 * r));
    }

    #[test]
    fn kernel_conjugation_symmetry(z in point(4.0), w in point(4.0), alpha in 0.3..2.0f64) {
        for convention in [Convention::BasisSum, Convention::PaperSum] {
            let cfg = FockConfig::new(alpha, convention).unwrap();
            let a = harmonic_kernel(&cfg, z, w);
            let b = harmonic_kernel(&cfg, w, z).conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn quadrature_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let q = QuadratureSpec::for_alpha(1.0, 0.0).with_step(0.1);
        let f = |z: Complex64| (-z.norm_sqr()).exp();
        let g = |z: Complex64| z.re * z.re * (-0.5 * z.norm_sqr()).exp();
        let lhs = integrate_plane(|z| a * f(z) + b * g(z), &q).unwrap().value;
        let rhs = a * integrate_plane(f, &q).unwrap().value + b * integrate_plane(g, &q).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
    }

    #[test]
    fn atomic_integrals_are_exact(a in atoms(5)) {
        let mu = Measure::atomic(a.clone()).unwrap();
        let got = integrate_measure(&mu, |z| z.norm_sqr(), &quad()).unwrap();
        let want: f64 = a.iter().map(|(z, w)| w * z.norm_sqr()).sum();
        prop_assert!((got.value - want).abs() <= 1e-13 * (1.0 + want));
        prop_assert_eq!(got.error_estimate, Some(0.0));
    }

    #[test]
    fn berezin_is_nonnegative_and_linear(a in atoms(5), z in point(5.0), s in 0.01..100.0f64) {
        for convention in [Convention::BasisSum, Convention::PaperSum] {
            let cfg = FockConfig::new(1.0, convention).unwrap();
            let mu = Measure::atomic(a.clone()).unwrap();
            let v = berezin_at(&cfg, &mu, z, &quad()).unwrap();
            let scaled = berezin_at(&cfg, &mu.scaled(s).unwrap(), z, &quad()).unwrap();
            prop_assert!(v >= 0.0);
            prop_assert!((scaled - s * v).abs() <= 1e-13 * s * (v + 1e-300));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncated_operators_are_hermitian_psd(a in atoms(6), alpha in 0.5..2.0f64) {
        let cfg = basis(alpha);
        let op = assemble(&cfg, &Measure::atomic(a).unwrap(), 8, &quad()).unwrap();
        prop_assert!(op.asymmetry <= 1e-12);
        for i in 0..op.dim() {
            for j in 0..op.dim() {
                prop_assert!((op.get(i, j) - op.get(j, i).conj()).norm() == 0.0);
            }
        }
        let spec = spectrum(&op).unwrap();
        prop_assert!(*spec.eigenvalues.last().unwrap() >= -1e-10 * spec.max().max(1.0));
    }

    #[test]
    fn schatten_norms_grow_with_the_cut(a in atoms(4)) {
        let cfg = basis(1.0);
        let mu = Measure::atomic(a).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let mut prev = 0.0;
            for n in [2, 5, 10, 20] {
                let s = schatten_norm(&spectrum(&assemble(&cfg, &mu, n, &quad()).unwrap()).unwrap(), p).unwrap();
                prop_assert!(s >= prev * (1.0 - 1e-10), "p={} n={} {} < {}", p, n, s, prev);
                prev = s;
            }
        }
    }

    #[test]
    fn trace_is_additive(a in atoms(4), b in atoms(4)) {
        let cfg = basis(1.0);
        let both: Vec<_> = a.iter().chain(&b).copied().collect();
        let t = |v: Vec<(Complex64, f64)>| assemble(&cfg, &Measure::atomic(v).unwrap(), 12, &quad()).unwrap().trace();
        let (ta, tb, tab) = (t(a), t(b), t(both));
        prop_assert!((tab - ta - tb).abs() <= 1e-10 * (1.0 + tab));
    }

    #[test]
    fn quadratic_form_matches_direct_integral(a in atoms(4), f in poly(6)) {
        let cfg = basis(1.0);
        let mu = Measure::atomic(a).unwrap();
        let op = assemble(&cfg, &mu, 6, &quad()).unwrap();
        let qf = quadratic_form(&op, &mu, &f, &quad()).unwrap();
        prop_assert!((qf.matrix - qf.direct).abs() <= 1e-10 * (1.0 + qf.direct));
    }

    #[test]
    fn reproducing_property(f in poly(8), z in point(2.0)) {
        let cfg = basis(1.0);
        let q = QuadratureSpec::for_alpha(1.0, 2.0).with_radius(14.0).with_step(0.1);
        let got = kernel_pairing(&cfg, &f, z, &q).unwrap();
        let want = f.eval(z);
        prop_assert!((got - want).norm() <= 1e-6 * (1.0 + want.norm()));
    }
}

#[test]
fn basis_is_orthonormal() {
    let cfg = basis(1.0);
    let q = QuadratureSpec::for_alpha(1.0, 0.0).with_radius(12.0).with_step(0.05);
    for m in -6i64..=6 {
        for n in -6i64..=6 {
            let v = integrate_gaussian_complex(
                &cfg,
                |z| basis_function(&cfg, BasisIndex(m), z) * basis_function(&cfg, BasisIndex(n), z).conj(),
                &q,
            )
            .unwrap();
            let want = if m == n { 1.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-8, "{m},{n}: {v}");
        }
    }
}

#[test]
fn paper_sum_doubles_constants() {
    let cfg = FockConfig::new(1.0, Convention::PaperSum).unwrap();
    let q = QuadratureSpec::for_alpha(1.0, 2.0);
    for z in [c(0.0, 0.0), c(1.0, -0.5), c(-1.5, 1.0)] {
        let v = kernel_pairing(&cfg, &HarmonicPoly::constant(1.0), z, &q).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-8, "{z}: {v}");
    }
}

#[test]
fn kernel_partial_sums_converge_geometrically() {
    let cfg = basis(1.0);
    for (z, w) in [(c(1.0, 0.5), c(-0.5, 1.5)), (c(2.0, 0.0), c(1.5, -1.0))] {
        let exact = harmonic_kernel(&cfg, z, w);
        let err = |n| (kernel_partial_sum(&cfg, z, w, n) - exact).norm();
        let (e10, e20) = (err(10), err(20));
        assert!(e20 <= 0.1 * e10 || e20 < 1e-12, "{e10} {e20}");
    }
}

#[test]
fn refinement_stays_within_the_error_estimate() {
    let f = |z: Complex64| (1.0 + z.re * z.im) * (-0.7 * z.norm_sqr()).exp();
    let coarse = QuadratureSpec::for_alpha(1.0, 0.0).with_step(0.4);
    let est = integrate_plane_with_estimate(f, &coarse).unwrap();
    let finer = integrate_plane(f, &coarse.with_step(0.2)).unwrap().value;
    assert!((finer - est.value).abs() <= est.error_estimate.unwrap() + 1e-14);
}

#[test]
fn gaussian_tails_are_negligible() {
    for alpha in [0.5, 1.0, 2.0] {
        let cfg = basis(alpha);
        let q = QuadratureSpec::for_alpha(alpha, 1.0);
        let wider = q.with_radius(q.radius + 2.0 / alpha.sqrt());
        let f = |z: Complex64| c(1.0 + z.norm_sqr(), 0.0);
        let a = integrate_gaussian_complex(&cfg, f, &q).unwrap();
        let b = integrate_gaussian_complex(&cfg, f, &wider).unwrap();
        assert!((a - b).norm() < 1e-10, "alpha {alpha}: {a} vs {b}");
    }
}

#[test]
fn symbol_schatten_bound_on_density_suite() {
    let cfg = basis(1.0);
    let q = QuadratureSpec::for_alpha(1.0, 4.0);
    for phi in density_suite() {
        let spectra: Vec<_> = [10, 20]
            .iter()
            .map(|&n| spectrum(&assemble_symbol(&cfg, &phi, n, &q).unwrap()).unwrap())
            .collect();
        for p in [1.0, 2.0, 3.0] {
            let bound = 2.0 / PI * integrate_plane(|z| phi.value(z).powf(p), &q).unwrap().value;
            for s in &spectra {
                let lhs = schatten_norm(s, p).unwrap().powf(p);
                assert!(lhs <= bound * (1.0 + 1e-9), "{phi:?} p={p}: {lhs} > {bound}");
            }
        }
        for s in &spectra {
            assert!(s.max() <= phi.sup() * (1.0 + 1e-9), "{phi:?}: {} > {}", s.max(), phi.sup());
        }
    }
}

fn atomic_suite() -> Vec<Measure> {
    vec![
        Measure::dirac(c(0.0, 0.0)),
        Measure::atomic([(c(2.0, 0.0), 1.0), (c(-2.0, 0.0), 1.0)]).unwrap(),
        Measure::lattice_from_fn(&LatticeSpec::new(1.0, 4).unwrap(), |a| (-a.norm_sqr()).exp()).unwrap(),
    ]
}

#[test]
fn bounded_quantities_are_comparable() {
    let cfg = basis(1.0);
    let q = quad();
    let grid = GridSpec::with_count(4.0, 33).unwrap();
    let lattice = LatticeSpec::new(1.0, 4).unwrap();
    for mu in atomic_suite() {
        let t = BerezinTransform::new(&cfg, &mu, &q).unwrap();
        let mut sup_b: f64 = 0.0;
        let mut sup_avg: f64 = 0.0;
        for z in grid.points() {
            sup_b = sup_b.max(t.at(z).unwrap());
            sup_avg = sup_avg.max(avg_function(&mu, z, 1.0, &q).unwrap());
        }
        let sup_lattice = lattice_points(&lattice)
            .into_iter()
            .map(|a| ball_mass(&mu, a, 1.0, &q).unwrap())
            .fold(0.0, f64::max);
        let v = [sup_b, sup_avg, sup_lattice];
        for x in v {
            for y in v {
                assert!(x / y <= 50.0, "{v:?}");
            }
        }
    }
}

#[test]
fn reports_are_consistent_deterministic_and_monotone() {
    let cfg = basis(1.0);
    let q = quad();
    for mu in atomic_suite() {
        let probe = Probe::for_measure(&cfg, &mu);
        let lattice = LatticeSpec::new(1.0, 3).unwrap();
        let carleson = carleson_report(&cfg, &mu, 1.0, &probe, &q).unwrap();
        assert_eq!(carleson, carleson_report(&cfg, &mu, 1.0, &probe, &q).unwrap());
        let schatten = schatten_report(&cfg, &mu, 2.0, 1.0, &lattice, &[5, 10, 20], &probe, &q).unwrap();
        for report in [&carleson, &schatten] {
            assert!(report.consistent(), "{report:?}");
        }
        for id in ["a", "d"] {
            let arm = schatten.arm(id).unwrap();
            assert!(arm.samples.windows(2).all(|w| w[1].value >= w[0].value * (1.0 - 1e-10)), "{arm:?}");
        }
    }
}

#[test]
fn reports_scale_with_the_measure() {
    let cfg = basis(1.0);
    let q = quad();
    let s = 3.0;
    for mu in atomic_suite() {
        let scaled = mu.scaled(s).unwrap();
        let probe = Probe::for_measure(&cfg, &mu);
        let lattice = LatticeSpec::new(1.0, 3).unwrap();
        let pairs = [
            (
                carleson_report(&cfg, &mu, 1.0, &probe, &q).unwrap(),
                carleson_report(&cfg, &scaled, 1.0, &probe, &q).unwrap(),
            ),
            (
                schatten_report(&cfg, &mu, 2.0, 1.0, &lattice, &[5, 10], &probe, &q).unwrap(),
                schatten_report(&cfg, &scaled, 2.0, 1.0, &lattice, &[5, 10], &probe, &q).unwrap(),
            ),
        ];
        for (a, b) in &pairs {
            assert_eq!(a.verdict, b.verdict);
            for (x, y) in a.arms.iter().zip(&b.arms) {
                assert_eq!(x.verdict, y.verdict, "arm {}", x.id);
                for (u, v) in x.samples.iter().zip(&y.samples) {
                    assert!((v.value - s * u.value).abs() <= 1e-9 * s * u.value.abs().max(1e-300), "arm {}", x.id);
                }
            }
        }
    }
}
