//! CSV and text renderers. Every float goes through [`sci`].

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use hfock_core::berezin::ScalarField;
use hfock_core::operator::{SpectralData, TraceIdentity, TruncatedOperator};
use hfock_core::ComplexPoint;
use serde::Serialize;

use crate::format::sci;

/// Header `x,y,value`, rows in grid order (`y` outer).
pub fn field_csv(field: &ScalarField) -> String {
    let mut out = String::from("x,y,value\n");
    for (z, v) in field.iter() {
        let _ = writeln!(out, "{},{},{}", sci(z.re), sci(z.im), sci(v));
    }
    out
}

/// Header `m,n,re,im`: entry `⟨T e_n, e_m⟩`, `m` outer.
pub fn matrix_csv(op: &TruncatedOperator) -> String {
    let mut out = String::from("m,n,re,im\n");
    let c = op.cut as i64;
    for m in -c..=c {
        for n in -c..=c {
            let e = op.entry(m, n);
            let _ = writeln!(out, "{m},{n},{},{}", sci(e.re), sci(e.im));
        }
    }
    out
}

/// Header `index,eigenvalue`, eigenvalues descending.
pub fn spectrum_csv(spec: &SpectralData) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, l) in spec.eigenvalues.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", sci(*l));
    }
    out
}

/// Header `x,y`.
pub fn points_csv(points: &[ComplexPoint]) -> String {
    let mut out = String::from("x,y\n");
    for z in points {
        let _ = writeln!(out, "{},{}", sci(z.re), sci(z.im));
    }
    out
}

/// `key value` lines.
pub fn trace_text(t: &TraceIdentity, cut: usize, settings: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in settings {
        let _ = writeln!(out, "{k} {v}");
    }
    let _ = writeln!(out, "cut {cut}");
    let _ = writeln!(out, "matrix_trace {}", sci(t.matrix_trace));
    let _ = writeln!(out, "kernel_integral {}", sci(t.kernel_integral));
    let _ = writeln!(out, "total_mass {}", sci(t.total_mass));
    let _ = writeln!(out, "truncated {}", t.truncated);
    let _ = writeln!(out, "berezin_integral {}", sci(t.berezin_integral));
    let _ = writeln!(out, "berezin_integral_half {}", sci(t.berezin_integral_half));
    out
}

/// Pretty JSON with the field order of the serialized types.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hfock_core::berezin::GridSpec;
    use hfock_core::operator::assemble;
    use hfock_core::{Convention, FockConfig, Measure, QuadratureSpec};
    use num_complex::Complex64;

    #[test]
    fn field_rows() {
        let grid = GridSpec::new(Complex64::new(0.0, 0.0), 1.0, 2, 1).unwrap();
        let f = ScalarField::sample(grid, "t", |z| Ok(z.re + 0.5)).unwrap();
        assert_eq!(
            field_csv(&f),
            "x,y,value\n0.00000000000e0,0.00000000000e0,5.00000000000e-1\n1.00000000000e0,0.00000000000e0,1.50000000000e0\n"
        );
    }

    #[test]
    fn matrix_rows() {
        let cfg = FockConfig::new(1.0, Convention::BasisSum).unwrap();
        let op = assemble(&cfg, &Measure::dirac(Complex64::new(0.0, 0.0)), 1, &QuadratureSpec::for_alpha(1.0, 0.0)).unwrap();
        let csv = matrix_csv(&op);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "-1,-1,0.00000000000e0,0.00000000000e0");
        assert_eq!(lines[5], "0,0,1.00000000000e0,0.00000000000e0");
    }
}
