//! Green-tensor trace gradients supplied to the quadrature force.
//!
//! Each trace is a function of the molecule–surface distance `d` and the
//! angular frequency `ω`. It is represented by a complex envelope and a
//! delay, the physical (real) trace being
//!
//! ```text
//! trace(d, ω) = Re[ envelope(d, ω) · exp(i · delay(d) · ω) ]
//! ```
//!
//! so that the quadrature can split products with the time kernel into
//! pieces of a single oscillation frequency. Non-oscillating traces use a
//! zero delay.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::mirror::MirrorSpec;

pub trait TraceFunction: Send + Sync {
    fn envelope(&self, d: f64, omega: f64) -> Complex64;

    /// Phase rate of the oscillation in `ω`, in seconds.
    fn delay(&self, _d: f64) -> f64 {
        0.0
    }

    fn value(&self, d: f64, omega: f64) -> f64 {
        (self.envelope(d, omega) * Complex64::cis(self.delay(d) * omega)).re
    }
}

/// A real, non-oscillating trace given by a closure.
pub struct FnTrace<F>(pub F);

impl<F> TraceFunction for FnTrace<F>
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn envelope(&self, d: f64, omega: f64) -> Complex64 {
        Complex64::new((self.0)(d, omega), 0.0)
    }
}

/// Trace of planar-geometry form
/// `prefactor · d^p · ω^q · Re[Σ_j c_j x^j · exp(i · delay_factor · x)]`
/// with `x = 2dω/c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarTrace {
    pub prefactor: f64,
    pub distance_power: i32,
    pub frequency_power: i32,
    #[serde(default = "one")]
    pub delay_factor: f64,
    /// `[re, im]` pairs, lowest power of `x` first.
    pub coefficients: Vec<[f64; 2]>,
}

fn one() -> f64 {
    1.0
}

impl PlanarTrace {
    fn validate(&self, field: &str) -> Result<()> {
        if !self.prefactor.is_finite() || !self.delay_factor.is_finite() {
            return Err(Error::validation(field, "prefactor and delay_factor must be finite"));
        }
        if self.coefficients.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::validation(field, "coefficients must be finite"));
        }
        Ok(())
    }
}

impl TraceFunction for PlanarTrace {
    fn envelope(&self, d: f64, omega: f64) -> Complex64 {
        let x = 2.0 * d * omega / SPEED_OF_LIGHT;
        // Horner in x
        let poly = self
            .coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + Complex64::new(c[0], c[1]));
        poly * (self.prefactor * d.powi(self.distance_power) * omega.powi(self.frequency_power))
    }

    fn delay(&self, d: f64) -> f64 {
        self.delay_factor * 2.0 * d / SPEED_OF_LIGHT
    }
}

/// The electric, magnetic and chiral trace gradients along the surface normal:
/// `∂_d Tr Im G`, `∂_d Tr[∇ × Im G × ∇′]` and `∂_d Tr[∇ × Im G]`.
#[derive(Clone, Default)]
pub struct GreenTraceFn {
    pub electric: Option<Arc<dyn TraceFunction>>,
    pub magnetic: Option<Arc<dyn TraceFunction>>,
    pub chiral: Option<Arc<dyn TraceFunction>>,
}

impl std::fmt::Debug for GreenTraceFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GreenTraceFn")
            .field("electric", &self.electric.is_some())
            .field("magnetic", &self.magnetic.is_some())
            .field("chiral", &self.chiral.is_some())
            .finish()
    }
}

impl GreenTraceFn {
    pub fn with_electric(mut self, trace: impl TraceFunction + 'static) -> Self {
        self.electric = Some(Arc::new(trace));
        self
    }

    pub fn with_magnetic(mut self, trace: impl TraceFunction + 'static) -> Self {
        self.magnetic = Some(Arc::new(trace));
        self
    }

    pub fn with_chiral(mut self, trace: impl TraceFunction + 'static) -> Self {
        self.chiral = Some(Arc::new(trace));
        self
    }

    /// Three real, non-oscillating closures.
    pub fn from_fns<E, M, C>(electric: E, magnetic: M, chiral: C) -> Self
    where
        E: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        M: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::default()
            .with_electric(FnTrace(electric))
            .with_magnetic(FnTrace(magnetic))
            .with_chiral(FnTrace(chiral))
    }
}

/// Chiral trace of a perfectly reflecting chiral plate:
/// `∂_d Tr[∇ × Im G] = ±(3c/8πd⁴ω)[cos x + x sin x − x² cos x / 3]`.
pub fn perfect_chiral_plate_trace(spec: MirrorSpec) -> PlanarTrace {
    PlanarTrace {
        prefactor: spec.sign() * 3.0 * SPEED_OF_LIGHT / (8.0 * PI),
        distance_power: -4,
        frequency_power: -1,
        delay_factor: 1.0,
        // Re[(1 − ix − x²/3) e^{ix}]
        coefficients: vec![[1.0, 0.0], [0.0, -1.0], [-1.0 / 3.0, 0.0]],
    }
}

pub fn perfect_chiral_plate(spec: MirrorSpec) -> GreenTraceFn {
    GreenTraceFn::default().with_chiral(perfect_chiral_plate_trace(spec))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceFile {
    #[serde(default)]
    electric: Option<PlanarTrace>,
    #[serde(default)]
    magnetic: Option<PlanarTrace>,
    #[serde(default)]
    chiral: Option<PlanarTrace>,
}

pub fn parse_traces(text: &str, origin: &Path) -> Result<GreenTraceFn> {
    let file: TraceFile = serde_json::from_str(text).map_err(|source| Error::Parse {
        path: origin.to_path_buf(),
        source,
    })?;
    let mut traces = GreenTraceFn::default();
    if let Some(t) = file.electric {
        t.validate("electric")?;
        traces = traces.with_electric(t);
    }
    if let Some(t) = file.magnetic {
        t.validate("magnetic")?;
        traces = traces.with_magnetic(t);
    }
    if let Some(t) = file.chiral {
        t.validate("chiral")?;
        traces = traces.with_chiral(t);
    }
    Ok(traces)
}

/// Load planar traces from a JSON file with optional `electric`,
/// `magnetic` and `chiral` entries.
pub fn load_traces(path: impl AsRef<Path>) -> Result<GreenTraceFn> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_traces(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mirror::curl_green_trace_derivative;

    #[test]
    fn plate_trace_matches_bracket() {
        for &spec in &[MirrorSpec::Positive, MirrorSpec::Negative] {
            let trace = perfect_chiral_plate_trace(spec);
            for &(d, omega) in &[(1e-7, 9.17e15), (3e-8, 1e14), (1e-6, 5e15)] {
                let direct = curl_green_trace_derivative(d, omega, spec).unwrap() / omega;
                let v = trace.value(d, omega);
                assert!((v - direct).abs() <= 1e-12 * direct.abs(), "{v} vs {direct}");
            }
        }
    }

    #[test]
    fn trace_file_round_trip() {
        let text = serde_json::json!({
            "chiral": perfect_chiral_plate_trace(MirrorSpec::Negative),
        })
        .to_string();
        let traces = parse_traces(&text, Path::new("inline")).unwrap();
        assert!(traces.electric.is_none() && traces.chiral.is_some());
        let a = traces.chiral.unwrap().value(1e-7, 2e15);
        let b = perfect_chiral_plate_trace(MirrorSpec::Negative).value(1e-7, 2e15);
        // powi may be constant-folded on one side only
        assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs());
        assert!(parse_traces(r#"{"gravity": null}"#, Path::new("inline")).is_err());
    }
}
