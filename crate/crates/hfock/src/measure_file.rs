//! JSON measure files.
//!
//! ```json
//! {"type": "atomic", "atoms": [{"x": 0, "y": 0, "w": 1}]}
//! {"type": "lattice_weighted", "lattice": {"r": 1, "extent": 1, "weights": [0, 0, 0, 0, 1, 0, 0, 0, 0]}}
//! {"type": "density", "density": {"family": "gaussian_bump",
//!   "params": {"amplitude": 1, "center": {"x": 0, "y": 0}, "width": 1}, "support_radius": 8}}
//! ```
//!
//! Density families and their parameters: `constant {c}`,
//! `gaussian_bump {amplitude, center, width}`,
//! `disk_indicator {center, radius, height}`,
//! `annulus {center, inner, outer, height}`,
//! `radial_poly_gaussian {coefficients, decay}`. A missing `center` is the
//! origin. Lattice weights are listed row-major, `y` outer. When `type` is
//! absent it is inferred from the one of `atoms`, `lattice`, `density` present.

use hfock_core::measure::point;
use hfock_core::{DensityProfile, LatticeSpec, Measure};
use num_complex::Complex64;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

fn fail<T>(path: &str, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        path: path.to_string(),
        message: message.into(),
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().map_or_else(|| fail(path, "expected an object"), Ok)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, ParseError> {
    obj.get(key).map_or_else(|| fail(&join(path, key), "missing field"), Ok)
}

fn number(v: &Value, path: &str) -> Result<f64, ParseError> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => fail(path, "expected a finite number"),
    }
}

fn number_field(obj: &Map<String, Value>, path: &str, key: &str) -> Result<f64, ParseError> {
    number(field(obj, path, key)?, &join(path, key))
}

fn nonnegative_field(obj: &Map<String, Value>, path: &str, key: &str) -> Result<f64, ParseError> {
    let x = number_field(obj, path, key)?;
    if x < 0.0 {
        return fail(&join(path, key), "must be >= 0");
    }
    Ok(x)
}

fn positive_field(obj: &Map<String, Value>, path: &str, key: &str) -> Result<f64, ParseError> {
    let x = number_field(obj, path, key)?;
    if x <= 0.0 {
        return fail(&join(path, key), "must be > 0");
    }
    Ok(x)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().map_or_else(|| fail(path, "expected an array"), Ok)
}

fn center(obj: &Map<String, Value>, path: &str) -> Result<Complex64, ParseError> {
    match obj.get("center") {
        None => Ok(Complex64::new(0.0, 0.0)),
        Some(v) => {
            let p = join(path, "center");
            let c = object(v, &p)?;
            Ok(Complex64::new(number_field(c, &p, "x")?, number_field(c, &p, "y")?))
        }
    }
}

/// Parses a measure file.
pub fn parse_measure(text: &str) -> Result<Measure, ParseError> {
    let value: Value = serde_json::from_str(text).or_else(|e| fail("<file>", format!("invalid JSON: {e}")))?;
    measure_from_value(&value)
}

pub fn measure_from_value(value: &Value) -> Result<Measure, ParseError> {
    let top = object(value, "<file>")?;
    let kind = match top.get("type") {
        Some(v) => v.as_str().map_or_else(|| fail("type", "expected a string"), Ok)?,
        None => inferred_type(top)?,
    };
    match kind {
        "atomic" => atomic(top),
        "lattice_weighted" => lattice_weighted(top),
        "density" => {
            let (profile, support) = density(top)?;
            Measure::density(profile, support).or_else(|e| fail("density", e.to_string()))
        }
        other => fail(
            "type",
            format!("unknown measure type `{other}` (expected atomic, lattice_weighted or density)"),
        ),
    }
}

fn inferred_type(top: &Map<String, Value>) -> Result<&'static str, ParseError> {
    let present: Vec<&str> = [("atoms", "atomic"), ("lattice", "lattice_weighted"), ("density", "density")]
        .into_iter()
        .filter(|(key, _)| top.contains_key(*key))
        .map(|(_, kind)| kind)
        .collect();
    match present[..] {
        [kind] => Ok(kind),
        [] => fail("type", "missing field (or one of atoms, lattice, density)"),
        _ => fail("type", "ambiguous measure, set `type`"),
    }
}

/// The profile of a `density` file, used as a symbol.
pub fn parse_symbol(text: &str) -> Result<DensityProfile, ParseError> {
    let value: Value = serde_json::from_str(text).or_else(|e| fail("<file>", format!("invalid JSON: {e}")))?;
    let top = object(&value, "<file>")?;
    let kind = match top.get("type") {
        Some(v) => v.as_str(),
        None => inferred_type(top).ok(),
    };
    match kind {
        Some("density") => Ok(density(top)?.0),
        _ => fail("type", "a symbol must be given as a density measure"),
    }
}

fn atomic(top: &Map<String, Value>) -> Result<Measure, ParseError> {
    let atoms = array(field(top, "", "atoms")?, "atoms")?;
    let mut out = Vec::with_capacity(atoms.len());
    for (i, a) in atoms.iter().enumerate() {
        let path = format!("atoms[{i}]");
        let obj = object(a, &path)?;
        let x = number_field(obj, &path, "x")?;
        let y = number_field(obj, &path, "y")?;
        let w = nonnegative_field(obj, &path, "w")?;
        out.push((point(x, y).or_else(|e| fail(&path, e.to_string()))?, w));
    }
    Measure::atomic(out).or_else(|e| fail("atoms", e.to_string()))
}

fn lattice_weighted(top: &Map<String, Value>) -> Result<Measure, ParseError> {
    let lat = object(field(top, "", "lattice")?, "lattice")?;
    let r = positive_field(lat, "lattice", "r")?;
    let extent = field(lat, "lattice", "extent")?
        .as_u64()
        .map_or_else(|| fail("lattice.extent", "expected a nonnegative integer"), Ok)?;
    let spec = LatticeSpec::new(r, extent as usize).or_else(|e| fail("lattice", e.to_string()))?;
    let raw = array(field(lat, "lattice", "weights")?, "lattice.weights")?;
    if raw.len() != spec.len() {
        return fail(
            "lattice.weights",
            format!("expected {} entries, found {}", spec.len(), raw.len()),
        );
    }
    let mut weights = Vec::with_capacity(raw.len());
    for (i, w) in raw.iter().enumerate() {
        let path = format!("lattice.weights[{i}]");
        let w = number(w, &path)?;
        if w < 0.0 {
            return fail(&path, "must be >= 0");
        }
        weights.push(w);
    }
    Measure::lattice_weighted(&spec, &weights).or_else(|e| fail("lattice", e.to_string()))
}

fn density(top: &Map<String, Value>) -> Result<(DensityProfile, f64), ParseError> {
    let d = object(field(top, "", "density")?, "density")?;
    let family = field(d, "density", "family")?
        .as_str()
        .map_or_else(|| fail("density.family", "expected a string"), Ok)?;
    let support = positive_field(d, "density", "support_radius")?;
    let path = "density.params";
    let p = object(field(d, "density", "params")?, path)?;
    let profile = match family {
        "constant" => DensityProfile::Constant {
            c: nonnegative_field(p, path, "c")?,
        },
        "gaussian_bump" => DensityProfile::GaussianBump {
            amplitude: nonnegative_field(p, path, "amplitude")?,
            center: center(p, path)?,
            width: positive_field(p, path, "width")?,
        },
        "disk_indicator" => DensityProfile::DiskIndicator {
            center: center(p, path)?,
            radius: positive_field(p, path, "radius")?,
            height: nonnegative_field(p, path, "height")?,
        },
        "annulus" => {
            let inner = nonnegative_field(p, path, "inner")?;
            let outer = positive_field(p, path, "outer")?;
            if inner >= outer {
                return fail("density.params.inner", "must be < outer");
            }
            DensityProfile::Annulus {
                center: center(p, path)?,
                inner,
                outer,
                height: nonnegative_field(p, path, "height")?,
            }
        }
        "radial_poly_gaussian" => {
            let raw = array(field(p, path, "coefficients")?, "density.params.coefficients")?;
            let mut coefficients = Vec::with_capacity(raw.len());
            for (i, c) in raw.iter().enumerate() {
                let cp = format!("density.params.coefficients[{i}]");
                let c = number(c, &cp)?;
                if c < 0.0 {
                    return fail(&cp, "must be >= 0");
                }
                coefficients.push(c);
            }
            DensityProfile::RadialPolyGaussian {
                coefficients,
                decay: positive_field(p, path, "decay")?,
            }
        }
        other => return fail("density.family", format!("unknown family `{other}`")),
    };
    profile.validate().or_else(|e| fail(path, e.to_string()))?;
    Ok((profile, support))
}
