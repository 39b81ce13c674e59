//! Cyclic Jacobi eigenvalue iteration for dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation. Only the
//! eigenvalues are tracked.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiOutcome {
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at termination.
    pub off_norm: f64,
}

fn off_diagonal_norm(m: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues of the Hermitian matrix stored row-major in `a` (`n × n`).
/// Only the Hermitian part of `a` is meaningful; the diagonal is read as real.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Result<JacobiOutcome> {
    assert_eq!(a.len(), n * n, "matrix storage does not match its dimension");
    let mut m = a.to_vec();
    for i in 0..n {
        m[i * n + i] = Complex64::new(m[i * n + i].re, 0.0);
    }
    let scale = m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * 1e-2 * scale;
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&m, n);
    while off > target && off > 0.0 {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, n, p, q);
            }
        }
        let next = off_diagonal_norm(&m, n);
        if next >= off && next <= 1e3 * target {
            off = next;
            break;
        }
        off = next;
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(JacobiOutcome {
        eigenvalues,
        sweeps,
        off_norm: off,
    })
}

fn rotate(m: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 || !mag.is_normal() {
        return;
    }
    let app = m[p * n + p].re;
    let aqq = m[q * n + q].re;
    // negligible pivot relative to both diagonal entries
    if mag <= f64::EPSILON * 1e-3 * (app.abs().min(aqq.abs())) {
        m[p * n + q] = Complex64::new(0.0, 0.0);
        m[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }

    // phase removal: column q *= conj(ph), row q *= ph
    let ph = apq / mag;
    for k in 0..n {
        m[k * n + q] *= ph.conj();
    }
    for k in 0..n {
        m[q * n + k] *= ph;
    }
    m[q * n + q] = Complex64::new(aqq, 0.0);

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        let new_p = akp * c - akq * s;
        let new_q = akp * s + akq * c;
        m[k * n + p] = new_p;
        m[k * n + q] = new_q;
        m[p * n + k] = new_p.conj();
        m[q * n + k] = new_q.conj();
    }
    m[p * n + p] = Complex64::new(app - t * mag, 0.0);
    m[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
}
