use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::quadrature::{decaying_quad, integrate_partitioned, oscillatory_quad, AdaptiveConfig, Estimate, QuadConfig};
use super::traces::{GreenTraceFn, TraceFunction};
use crate::constants::{BOLTZMANN, HBAR, MU_0};
use crate::error::{Error, Result};
use crate::molecule::Molecule;
use crate::response::{switched_pole, TransitionKernelParams};
use crate::specfun::bose_einstein;

/// Electric, magnetic and chiral contributions to the normal force (N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceComponents {
    pub electric: Estimate,
    pub magnetic: Estimate,
    pub chiral: Estimate,
}

impl ForceComponents {
    fn zero() -> Self {
        let z = Estimate { value: 0.0, error: 0.0 };
        Self {
            electric: z,
            magnetic: z,
            chiral: z,
        }
    }

    pub fn total(&self) -> Estimate {
        Estimate {
            value: self.electric.value + self.magnetic.value + self.chiral.value,
            error: self.electric.error + self.magnetic.error + self.chiral.error,
        }
    }
}

/// Thermal integrals stop at this many `k_B T/ħ`.
const THERMAL_CUTOFF: f64 = 50.0;
const MAX_THERMAL_PANELS: usize = 20_000;

/// Trace, strength coefficient, frequency weight and output slot.
type Channel<'a> = (
    &'a Option<Arc<dyn TraceFunction>>,
    f64,
    fn(f64) -> f64,
    &'a mut Estimate,
);

fn add(acc: &mut Estimate, e: Estimate) {
    acc.value += e.value;
    acc.error += e.error;
}

/// `∫₀^∞ w(ω) trace(d, ω) ψ(ω, t) dω` for one transition.
fn channel_integral(
    trace: &dyn TraceFunction,
    weight: fn(f64) -> f64,
    d: f64,
    t: f64,
    params: &TransitionKernelParams,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let tau = trace.delay(d);
    let minus = Complex64::new(params.omega_kn, -params.gamma_sum);
    let switch = (-Complex64::i() * minus * t).exp();
    let switch_conj = switch.conj();
    let mut total = Estimate { value: 0.0, error: 0.0 };

    // The vacuum kernel times a trace of a single delay splits into three
    // pieces, each oscillating at one rate ν: Re[C(ω) e^{iνω}].
    type Piece<'a> = Box<dyn Fn(f64) -> Complex64 + 'a>;
    let pieces: [(f64, Piece); 3] = [
        (tau, Box::new(|w: f64| trace.envelope(d, w) * (1.0 / (w + minus)).re)),
        (
            tau - t,
            Box::new(|w: f64| -0.5 * trace.envelope(d, w) * switch / (w + minus)),
        ),
        (
            tau + t,
            Box::new(|w: f64| -0.5 * trace.envelope(d, w) * switch_conj / (w + minus).conj()),
        ),
    ];
    for (rate, envelope) in pieces.iter() {
        let integrand = |w: f64| {
            if w == 0.0 {
                return 0.0;
            }
            weight(w) * (envelope(w) * Complex64::cis(rate * w)).re
        };
        let piece = if *rate == 0.0 {
            let adaptive = AdaptiveConfig {
                abs_tol: cfg.abs_tol,
                rel_tol: cfg.rel_tol.max(1e-13),
                max_intervals: 8000,
            };
            decaying_quad(integrand, 0.0, params.omega_kn.abs().max(1.0), &adaptive)?
        } else {
            let r = oscillatory_quad(integrand, 2.0 * PI / rate.abs(), cfg)?;
            Estimate {
                value: r.value,
                error: r.error,
            }
        };
        add(&mut total, piece);
    }

    if params.temperature > 0.0 {
        let upper = THERMAL_CUTOFF * BOLTZMANN * params.temperature / HBAR;
        let plus = minus.conj();
        let integrand = |w: f64| {
            if w == 0.0 {
                return 0.0;
            }
            let n = bose_einstein(w, params.temperature).unwrap_or(0.0);
            if n == 0.0 {
                return 0.0;
            }
            let kernel = (switched_pole(w + minus, t) - switched_pole(w - plus, t)).re;
            weight(w) * trace.value(d, w) * n * kernel
        };
        // ω·h(ω) must vanish at 0 for the integral to exist
        let (w1, w2) = (1e-8 * upper, 1e-10 * upper);
        let (p1, p2) = ((w1 * integrand(w1)).abs(), (w2 * integrand(w2)).abs());
        if !p2.is_finite() || (p2 > 0.0 && p2 > 0.5 * p1) {
            return Err(Error::Convergence {
                what: "thermal frequency integral",
                detail: "integrand is not integrable at zero frequency (trace too singular as ω → 0)".into(),
            });
        }
        let phase = upper * (tau.abs() + t) / PI;
        let panels = (phase.ceil() as usize).clamp(1, MAX_THERMAL_PANELS);
        let adaptive = AdaptiveConfig {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol.max(1e-12),
            max_intervals: (4 * panels).max(4000),
        };
        add(
            &mut total,
            integrate_partitioned(integrand, 0.0, upper, panels, &adaptive)?,
        );
    }
    Ok(total)
}

/// Dynamical force after switch-on at `t = 0`, integrated numerically over
/// frequency from Green-tensor traces.
///
/// ```text
/// F_e = (μ₀/3π) Σ |d|² ∫ ω² ∂_d Tr Im G ψ dω
/// F_m = −(μ₀/3π) Σ |m|² ∫ ∂_d Tr[∇ × Im G × ∇′] ψ dω
/// F_c = −(2μ₀/3π) Σ R ∫ ω ∂_d Tr[∇ × Im G] ψ dω
/// ```
///
/// with `ψ` from [`crate::response::psi`] at the transition's width.
/// Channels without a trace, or with vanishing molecular strength,
/// contribute exactly zero.
pub fn force_by_quadrature(
    mol: &Molecule,
    d: f64,
    t: f64,
    temperature: f64,
    traces: &GreenTraceFn,
    cfg: &QuadConfig,
) -> Result<ForceComponents> {
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::domain(
            "force_by_quadrature",
            "distance must be finite and > 0",
            d,
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain("force_by_quadrature", "time must be finite and >= 0", t));
    }
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::domain(
            "force_by_quadrature",
            "temperature must be finite and >= 0",
            temperature,
        ));
    }
    cfg.validate()?;
    let mut out = ForceComponents::zero();
    if t == 0.0 {
        return Ok(out);
    }
    let base = MU_0 / (3.0 * PI);
    for tr in mol.transitions() {
        let params = TransitionKernelParams::new(tr.omega, 0.5 * tr.gamma, temperature)?;
        let channels: [Channel; 3] = [
            (&traces.electric, base * tr.dipole_sq, |w| w * w, &mut out.electric),
            (
                &traces.magnetic,
                -base * tr.mag_sq.unwrap_or(0.0),
                |_| 1.0,
                &mut out.magnetic,
            ),
            (&traces.chiral, -2.0 * base * tr.rotatory, |w| w, &mut out.chiral),
        ];
        for (trace, coefficient, weight, slot) in channels {
            let Some(trace) = trace else { continue };
            if coefficient == 0.0 {
                continue;
            }
            let e = channel_integral(trace.as_ref(), weight, d, t, &params, cfg)?;
            add(
                slot,
                Estimate {
                    value: coefficient * e.value,
                    error: coefficient.abs() * e.error,
                },
            );
        }
    }
    Ok(out)
}
