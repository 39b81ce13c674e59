//! File formats, output writers and the command-line front end of the
//! harmonic Fock toolkit.

pub mod cli;
pub mod format;
pub mod measure_file;
pub mod output;
pub mod settings;
