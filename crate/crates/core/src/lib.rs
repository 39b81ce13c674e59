//! Harmonic Fock space numerics: reproducing kernels, Berezin transforms,
//! averaging functions, truncated Toeplitz operators and the diagnostics
//! built on them.

#![no_std]

extern crate alloc;

pub mod berezin;
pub mod criteria;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod measure;
pub mod operator;
pub mod quadrature;

pub use error::{Error, Result};
pub use kernel::{BasisIndex, Convention, FockConfig, HarmonicPoly};
pub use measure::{Atom, ComplexPoint, DensityProfile, LatticeSpec, Measure};
pub use quadrature::{QuadratureSpec, Scheme};
