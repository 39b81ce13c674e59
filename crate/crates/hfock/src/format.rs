//! Fixed float formatting shared by every text output.

/// Scientific notation with 12 significant digits, e.g. `3.67879441171e-1`.
/// Negative zero prints as zero.
pub fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.11e}", x)
}
